#!/usr/bin/env python3
"""
TreeCode Hub Launcher
Checks the runtime dependency and starts the treecode command line
"""

import importlib.util
import sys

REQUIRED_MODULES = ("bitarray",)


def check_dependencies():
    """Return the required modules that cannot be imported"""
    return [name for name in REQUIRED_MODULES if importlib.util.find_spec(name) is None]


def main():
    missing = check_dependencies()
    if missing:
        print(f"Missing packages: {', '.join(missing)}", file=sys.stderr)
        print("Install them with: pip install -r requirements.txt", file=sys.stderr)
        sys.exit(1)

    from core.cli import run
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
