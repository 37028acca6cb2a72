"""Module entrypoint to allow ``python -m trispec``."""
from .cli import run


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
