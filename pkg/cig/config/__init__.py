from .default import create_config
