import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

class Settings:
    """Application configuration settings"""

    # Unit system (natural units by default)
    HBAR: float = float(os.getenv("HBAR", "1.0"))
    K_BOLTZMANN: float = float(os.getenv("K_BOLTZMANN", "1.0"))

    # Output documents
    OUTPUT_DIR: str = os.getenv("ANYON_OUTPUT_DIR", "")
    OUTPUT_PRECISION: int = int(os.getenv("OUTPUT_PRECISION", "12"))
    SCAN_JOBS: int = int(os.getenv("SCAN_JOBS", "1"))

    # Numerical tolerances
    BISECTION_TOLERANCE: float = float(os.getenv("BISECTION_TOLERANCE", "1e-12"))
    REGIME_TOLERANCE: float = float(os.getenv("REGIME_TOLERANCE", "1e-14"))

    # Brute-force oracle guards
    ORACLE_TAIL_TOLERANCE: float = float(os.getenv("ORACLE_TAIL_TOLERANCE", "1e-13"))
    ORACLE_MAX_CONFIGURATIONS: int = int(os.getenv("ORACLE_MAX_CONFIGURATIONS", "5000000"))

    # Otto heating-stroke convention: "narrative" or "literal"
    OTTO_HEAT_FORM: str = os.getenv("OTTO_HEAT_FORM", "narrative")

    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

    @property
    def output_dir(self) -> str:
        """Default directory for emitted documents (empty means current directory)"""
        return self.OUTPUT_DIR or "."

settings = Settings()
