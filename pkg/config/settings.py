"""
Django settings for the curvecount project.

There is no web surface: Django provides the management command, the
settings layer, form validation, templates for text output and the test
runner.
"""
import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


SECRET_KEY = os.environ.get("SECRET_KEY", "dev-secret-key-change-me")

DEBUG = os.environ.get("DEBUG", "0") == "1"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'curvecount',
]

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'autoescape': False,
        },
    },
]

# Nothing is persisted.
DATABASES = {}


# Curve counting

# Safety cap on t-cutoffs, q/λ orders and Hall k accepted from the command line.
CURVECOUNT_MAX_DEGREE = int(os.environ.get("CURVECOUNT_MAX_DEGREE", "12"))

CURVECOUNT_SCHEMA_VERSION = 1


# Logging

CURVECOUNT_LOG_LEVEL = os.environ.get("CURVECOUNT_LOG_LEVEL", "WARNING").upper()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "plain",
        },
    },
    "loggers": {
        "curvecount": {
            "handlers": ["console"],
            "level": CURVECOUNT_LOG_LEVEL,
            "propagate": False,
        },
    },
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True
