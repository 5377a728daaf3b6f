from copy import deepcopy
from xnippet import XnippetManager
from xnippet import setup_logging
from .lib.errors import ConfigError

__version__ = '0.1.0'
config = XnippetManager(package_name=__package__,
                        package_version=__version__,
                        package__file__=__file__,
                        config_filename='config.yaml')

__all__ = ['__version__', 'config', 'get_setting', 'setup_logging', 'load_scenario']


def get_setting(*keys):
    """Walk `config.config` along `keys`.

    Raises:
        ConfigError: If a key is missing.
    """
    node = config.config
    for i, key in enumerate(keys):
        if not isinstance(node, dict) or key not in node:
            raise ConfigError(f"Missing configuration key '{'.'.join(keys[:i + 1])}' in {__package__} config.")
        node = node[key]
    return deepcopy(node)


def load_scenario(path):
    from .app.scenario import load_scenario as _load
    return _load(path)
