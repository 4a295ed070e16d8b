from sgk._version import VERSION

__version__ = VERSION
