from pydantic import ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from sepdec.exceptions import BadConfig
from sepdec.models.core_types import Tolerances


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_prefix="SEPDEC_", case_sensitive=False)

    tol: float = 1e-9
    zero_threshold: float = 1e-12
    psd_tol: float = 1e-10

    # structural/spectral comparisons inside this band are logged, not judged
    band_low: float = 1e-11
    band_high: float = 1e-7

    fuzz_workers: int = 4
    max_draw_attempts: int = 16
    exhaustive_minor_limit: int = 8
    minor_sample_size: int = 2000

    log_level: str = "WARNING"
    log_format: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"

    def tolerances(self, residual_tol: float | None = None) -> Tolerances:
        return Tolerances(
            zero_threshold=self.zero_threshold,
            residual_tol=self.tol if residual_tol is None else residual_tol,
            psd_tol=self.psd_tol,
        )

    def in_band(self, value: float) -> bool:
        return self.band_low < value < self.band_high


def load_settings() -> tuple[Settings, BadConfig | None]:
    """Environment settings, or the defaults plus the error that rejected them."""
    try:
        configured = Settings()
        configured.tolerances()
        return configured, None
    except ValidationError as exc:
        error = BadConfig(
            "invalid SEPDEC_* environment settings",
            errors=[f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in exc.errors()],
        )
        return Settings.model_construct(), error


settings, settings_error = load_settings()
