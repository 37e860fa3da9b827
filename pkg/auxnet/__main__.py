"""``python -m auxnet``."""
from .cli import main

raise SystemExit(main())
