'''Entrypoint of `python -m src.selfsim`.
'''

import sys
from .cli import main

sys.exit(main())
