"""raptorchain - a raptor-coded IoT blockchain simulator."""
from .cli.commands import main

__version__ = "0.1.0"

__all__ = ["main"]


if __name__ == "__main__":
    main()
