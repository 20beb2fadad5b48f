__title__ = "Kloverify"
__version__ = "0.1"
