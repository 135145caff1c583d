from audlet.cli import manager
from audlet.logging import setup_logging

if __name__ == "__main__":
    setup_logging()
    manager()
