import os
import os.path
import yaml


DEFAULTS_PATH = os.path.join(os.path.dirname(__file__), "defaults.yml")
THREADS_VARIABLE = "SPECTRA_COUNT_THREADS"
SETTINGS = {}


def load_settings(path=DEFAULTS_PATH):
    """
    Replace current settings with values from yaml file.

    :param path: path to the yaml file
    :returns: loaded settings
    """

    with open(path, "r") as fh:
        values = yaml.safe_load(fh.read()) or {}

    SETTINGS.clear()
    SETTINGS.update(values)

    return SETTINGS


def get_setting(name, default=None):
    if name == "threads" and os.environ.get(THREADS_VARIABLE):
        return int(os.environ[THREADS_VARIABLE])
    return SETTINGS.get(name, default)


def set_setting(name, value):
    SETTINGS[name] = value


def resolve_threads(threads=None):
    """Number of sample loop workers: explicit value, environment, defaults, cores."""
    if threads is None:
        threads = get_setting("threads")
    if threads is None:
        threads = os.cpu_count() or 1
    return max(1, int(threads))


load_settings()
