import logging
import os
import uuid
from typing import Optional

from dotenv import load_dotenv
from posthog import Posthog
from pydantic import BaseModel

from kcore_peel.telemetry.views import BaseTelemetryEvent
from kcore_peel.utils import singleton

load_dotenv()


logger = logging.getLogger(__name__)


class TelemetrySettings(BaseModel):
	"""
	Telemetry switches, read from the environment by from_env.

	Default values:
	- enabled: False (ANONYMIZED_TELEMETRY=true turns it on)
	- api_key: '' (KCORE_PEEL_TELEMETRY_KEY, required as well)
	- host: https://eu.i.posthog.com (KCORE_PEEL_TELEMETRY_HOST)
	- debug: False (KCORE_PEEL_LOGGING_LEVEL=debug keeps posthog's own logger)
	"""

	enabled: bool = False
	api_key: str = ''
	host: str = 'https://eu.i.posthog.com'
	debug: bool = False

	@classmethod
	def from_env(cls) -> 'TelemetrySettings':
		return cls(
			enabled=os.getenv('ANONYMIZED_TELEMETRY', 'false').lower() == 'true',
			api_key=os.getenv('KCORE_PEEL_TELEMETRY_KEY', ''),
			host=os.getenv('KCORE_PEEL_TELEMETRY_HOST') or cls.model_fields['host'].default,
			debug=os.getenv('KCORE_PEEL_LOGGING_LEVEL', 'info').lower() == 'debug',
		)

	@property
	def active(self) -> bool:
		return self.enabled and bool(self.api_key)


@singleton
class ProductTelemetry:
	"""
	Anonymized reporting of decompositions and benchmark runs.

	Events carry size classes, config labels and counters, never vertex ids or paths.
	Every process reports under its own random session id and nothing is stored on disk.
	"""

	def __init__(self, settings: Optional[TelemetrySettings] = None) -> None:
		self.settings = settings or TelemetrySettings.from_env()
		self.session_id = uuid.uuid4().hex
		self.sent = 0
		self._client: Optional[Posthog] = None

		if self.settings.active:
			self._client = Posthog(project_api_key=self.settings.api_key, host=self.settings.host, disable_geoip=True)
			if not self.settings.debug:
				logging.getLogger('posthog').disabled = True
			logger.info('Anonymized telemetry enabled.')
		else:
			logger.debug('Telemetry disabled')

	@property
	def enabled(self) -> bool:
		return self._client is not None

	def capture(self, event: BaseTelemetryEvent) -> None:
		if self._client is None:
			return
		logger.debug(f'Telemetry event {event.name}: {event.properties}')
		try:
			# posthog queues the event on its consumer thread
			self._client.capture(
				distinct_id=self.session_id,
				event=event.name,
				properties={**event.properties, '$process_person_profile': False},
			)
		except Exception as e:
			logger.error(f'Failed to send telemetry event {event.name}: {e}')
			return
		self.sent += 1

	def flush(self) -> None:
		"""Drain queued events before a short-lived process exits"""
		if self._client is None or not self.sent:
			return
		try:
			self._client.flush()
		except Exception as e:
			logger.warning(f'Failed to flush telemetry: {e}')
