# -----------------------------------------------------------------------------
#   @brief:
#       Project-wide logger. Every module does `from cig.misc import logger`
#   and calls `logger.info(...)`, `logger.warning(...)` and so on.
# -----------------------------------------------------------------------------

import logging
import os
import sys

from termcolor import colored

__all__ = ['set_file_handler', 'get_logdir']  # the worker is '_logger'

_LEVEL_TAGS = {
    logging.WARNING: colored('WRN', 'red'),
    logging.ERROR: colored('ERR', 'red', attrs=['underline']),
    logging.CRITICAL: colored('ERR', 'red', attrs=['underline']),
}


class _CigFormatter(logging.Formatter):
    '''
        @brief:
            green location stamp, red tag for warnings and errors
    '''

    def format(self, record):
        stamp = colored('[%(asctime)s @%(filename)s:%(lineno)d]', 'green')
        tag = _LEVEL_TAGS.get(record.levelno)
        fmt = stamp + ' ' + (tag + ' ' if tag else '') + '%(message)s'

        if hasattr(self, '_style'):
            self._style._fmt = fmt
        self._fmt = fmt
        return super(_CigFormatter, self).format(record)


_logger = logging.getLogger('cig')
_logger.propagate = False
_logger.setLevel(logging.INFO)

_con_handler = logging.StreamHandler(sys.stdout)
_con_handler.setFormatter(_CigFormatter(datefmt='%m%d %H:%M:%S'))
_logger.addHandler(_con_handler)

_LOGDIR = [None]


def set_file_handler(path, file_name='log.log'):
    """Mirror every record into `path/file_name`; the directory is created."""
    path = os.path.abspath(path)
    os.makedirs(path, exist_ok=True)

    for handler in list(_logger.handlers):
        if isinstance(handler, logging.FileHandler):
            _logger.removeHandler(handler)
            handler.close()

    file_handler = logging.FileHandler(
        filename=os.path.join(path, file_name), encoding='utf-8', mode='w'
    )
    file_handler.setFormatter(_CigFormatter(datefmt='%m%d %H:%M:%S'))
    _logger.addHandler(file_handler)
    _LOGDIR[0] = path

    _logger.info('Log file set to {}'.format(path))


def get_logdir():
    return _LOGDIR[0]


_LOGGING_METHOD = ['info', 'warning', 'error', 'critical',
                   'warn', 'exception', 'debug']

# export logger functions
for func in _LOGGING_METHOD:
    locals()[func] = getattr(_logger, func)
