import os
from pydantic_settings import BaseSettings
from dotenv import load_dotenv

load_dotenv()

class Settings(BaseSettings):
    APP_NAME: str = "thickslide"
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "WARNING")

    # Paving
    DEFAULT_EPSILON: float = float(os.getenv("DEFAULT_EPSILON", "0.02"))
    # Domain [-w, w]^n used when a system file has no `domain` line
    DEFAULT_DOMAIN_HALF_WIDTH: float = float(os.getenv("DEFAULT_DOMAIN_HALF_WIDTH", "2.0"))
    BOX_BUDGET: int = int(os.getenv("BOX_BUDGET", "10000000"))
    WORKERS: int = int(os.getenv("WORKERS", "1"))

    # Monte-Carlo oracle
    THIN_TOLERANCE: float = float(os.getenv("THIN_TOLERANCE", "1e-9"))
    ORACLE_SAMPLES: int = int(os.getenv("ORACLE_SAMPLES", "10000"))
    ORACLE_SEED: int = int(os.getenv("ORACLE_SEED", "0"))
    ROOT_BISECTIONS: int = int(os.getenv("ROOT_BISECTIONS", "80"))

    # SVG rendering
    SVG_IMAGE_SIZE: int = int(os.getenv("SVG_IMAGE_SIZE", "800"))
    SVG_STROKE_WIDTH: float = float(os.getenv("SVG_STROKE_WIDTH", "0.0"))
    # Red inside, blue outside, orange penumbra; undetermined boxes in a lighter orange
    SVG_COLORS: dict = {
        "IN": "#d62728",
        "PEN": "#ff9900",
        "OUT": "#1f77b4",
        "UNKNOWN": "#ffe0a0",
    }

    # Pydantic Settings Config
    model_config = {"env_file": ".env", "extra": "ignore"}

settings = Settings()
