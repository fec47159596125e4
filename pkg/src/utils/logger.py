"""
Logging utility for the sampling library and bench harness
Logs to both console (stderr) and a daily file
"""

import logging
import os
from datetime import datetime

from src.utils.settings import env_flag, load_settings, resolve_path


def setup_logger(name, log_dir=None, level=None):
    """
    Set up logger with file and console handlers

    Args:
        name: Logger name (usually module name)
        log_dir: Directory for log files (defaults to config/file_paths.yaml)
        level: Log level name (defaults to config, BITSAMPLER_LOG_LEVEL overrides)

    Returns:
        logger: Configured logger instance
    """
    logging_config = load_settings('file_paths').get('logging', {})
    log_dir = log_dir or os.getenv('BITSAMPLER_LOG_DIR', logging_config.get('log_dir', 'logs'))
    level = level or os.getenv('BITSAMPLER_LOG_LEVEL', logging_config.get('log_level', 'INFO'))
    to_file = env_flag('BITSAMPLER_LOG_TO_FILE', logging_config.get('log_to_file', True))

    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Avoid duplicate handlers
    if logger.handlers:
        return logger

    file_formatter = logging.Formatter(
        '%(asctime)s | %(name)s | %(levelname)s | %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )
    console_formatter = logging.Formatter('%(levelname)s: %(message)s')

    if to_file:
        directory = resolve_path(log_dir)
        os.makedirs(directory, exist_ok=True)
        log_filename = directory / f"bitsampler_{datetime.now().strftime('%Y%m%d')}.log"
        file_handler = logging.FileHandler(log_filename, encoding='utf-8')
        file_handler.setLevel(level)
        file_handler.setFormatter(file_formatter)
        logger.addHandler(file_handler)

    # stderr keeps stdout free for CSV/JSON reports
    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)
    console_handler.setFormatter(console_formatter)
    logger.addHandler(console_handler)

    return logger


# Test the logger
if __name__ == "__main__":
    logger = setup_logger('test')
    logger.info("This is an info message")
    logger.warning("This is a warning message")
    logger.error("This is an error message")
