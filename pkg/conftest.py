"""Configure Django before pytest collects the core test suite."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'framedrag.settings')
django.setup()
