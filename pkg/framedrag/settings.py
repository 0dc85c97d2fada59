import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# The simulator has no web surface; the key only satisfies Django's checks.
SECRET_KEY = os.environ.get('FRAMEDRAG_SECRET_KEY', 'framedrag-offline-simulation-key')

DEBUG = False

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'core',
]

# No models, no database.
DATABASES = {}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# ===================================================================
# SIMULATION DEFAULTS
# ===================================================================
FRAMEDRAG = {
    # Any config key can be overridden with <ENV_PREFIX><SECTION>__<KEY>
    'ENV_PREFIX': os.environ.get('FRAMEDRAG_ENV_PREFIX', 'FRAMEDRAG_'),
    'DEFAULT_CONFIG': BASE_DIR / 'config' / 'nominal.cfg',
    # Threads used by grid sweeps (entropy curves, collision grids, temperature sweeps)
    'WORKERS': int(os.environ.get('FRAMEDRAG_WORKERS', '1')),
    'CODE_VERSION': '0.3.0',
}


# ===================================================================
# LOGGING
# ===================================================================
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'core': {
            'handlers': ['console'],
            'level': os.environ.get('FRAMEDRAG_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}
