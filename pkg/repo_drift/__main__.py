"""Allow `python -m repo_drift`."""
from .cli import main

if __name__ == "__main__":
    main()
