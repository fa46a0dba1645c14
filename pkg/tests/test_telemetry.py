import os

import pytest

from kcore_peel.telemetry.service import ProductTelemetry, TelemetrySettings
from kcore_peel.telemetry.views import BenchTelemetryEvent, DecomposeTelemetryEvent, size_class


class RecordingClient:
	def __init__(self, fail: bool = False):
		self.events = []
		self.flushed = 0
		self.fail = fail

	def capture(self, distinct_id, event, properties):
		if self.fail:
			raise ConnectionError('offline')
		self.events.append((distinct_id, event, properties))

	def flush(self):
		self.flushed += 1


def test_size_class():
	assert [size_class(c) for c in (0, 1, 2, 3, 4, 7, 8, 1000)] == [0, 1, 2, 2, 3, 3, 4, 10]
	assert size_class(-5) == 0


def test_event_properties_exclude_name():
	event = DecomposeTelemetryEvent(
		n_class=3, m2_class=4, kmax=3, config='online:vgc128:auto', rounds=4, subrounds=1, restarts=0, wall_ms=1.5
	)
	assert event.name == 'decompose'
	assert event.properties == {
		'n_class': 3,
		'm2_class': 4,
		'kmax': 3,
		'config': 'online:vgc128:auto',
		'rounds': 4,
		'subrounds': 1,
		'restarts': 0,
		'wall_ms': 1.5,
	}


def test_settings_need_both_switch_and_key(monkeypatch):
	assert not TelemetrySettings().active
	assert not TelemetrySettings(enabled=True).active
	assert not TelemetrySettings(api_key='phc_x').active
	assert TelemetrySettings(enabled=True, api_key='phc_x').active

	monkeypatch.setenv('ANONYMIZED_TELEMETRY', 'TRUE')
	monkeypatch.setenv('KCORE_PEEL_TELEMETRY_KEY', 'phc_x')
	monkeypatch.delenv('KCORE_PEEL_TELEMETRY_HOST', raising=False)
	settings = TelemetrySettings.from_env()
	assert settings.active
	assert settings.host == 'https://eu.i.posthog.com'


@pytest.mark.skipif(os.getenv('ANONYMIZED_TELEMETRY', 'false').lower() == 'true', reason='telemetry enabled in this environment')
def test_telemetry_is_off_by_default():
	telemetry = ProductTelemetry()
	assert telemetry is ProductTelemetry()
	assert not telemetry.enabled
	telemetry.capture(BenchTelemetryEvent(n_class=1, m2_class=0, configs=['offline:vgc0:single'], repeat=0, verified=True))
	telemetry.flush()
	assert telemetry.sent == 0


def test_capture_uses_the_session_id_and_flushes(monkeypatch):
	telemetry = ProductTelemetry()
	client = RecordingClient()
	monkeypatch.setattr(telemetry, '_client', client)
	monkeypatch.setattr(telemetry, 'sent', 0)

	telemetry.flush()
	assert client.flushed == 0
	telemetry.capture(BenchTelemetryEvent(n_class=2, m2_class=1, configs=['offline:vgc0:single'], repeat=1, verified=True))
	telemetry.flush()

	assert client.flushed == 1
	[(distinct_id, event, properties)] = client.events
	assert distinct_id == telemetry.session_id
	assert event == 'bench'
	assert properties['n_class'] == 2
	assert properties['$process_person_profile'] is False


def test_failed_capture_is_logged_not_raised(monkeypatch):
	telemetry = ProductTelemetry()
	monkeypatch.setattr(telemetry, '_client', RecordingClient(fail=True))
	monkeypatch.setattr(telemetry, 'sent', 0)
	telemetry.capture(BenchTelemetryEvent(n_class=0, m2_class=0, configs=[], repeat=0, verified=True))
	assert telemetry.sent == 0
