import os
import logging

from sources.config import config

class Logger:
    """
    File logger shared by the engines. One log file per module under the configured log dir.
    """
    def __init__(self, log_filename: str):
        self.folder = config.get('MAIN', 'log_dir', fallback='.logs')
        self.enabled = config.getboolean('MAIN', 'log_enabled', fallback=True)
        self.log_path = os.path.join(self.folder, log_filename)
        self.logger = None
        self.last_log_msg = ""
        if self.enabled:
            self.enabled = self.create_folder(self.folder)
        if self.enabled:
            self.create_logging(log_filename)

    def create_logging(self, log_filename: str) -> None:
        self.logger = logging.getLogger(f"rainbowseek.{log_filename}")
        self.logger.setLevel(logging.DEBUG)
        self.logger.handlers.clear()
        self.logger.propagate = False
        try:
            file_handler = logging.FileHandler(self.log_path)
        except OSError:
            self.enabled = False
            return
        formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
        file_handler.setFormatter(formatter)
        self.logger.addHandler(file_handler)

    def create_folder(self, path: str) -> bool:
        """Create log dir"""
        try:
            if not os.path.exists(path):
                os.makedirs(path, exist_ok=True)
            return True
        except OSError:
            return False

    def log(self, message: str, level=logging.INFO) -> None:
        if self.last_log_msg == message:
            return
        if self.enabled and self.logger is not None:
            self.last_log_msg = message
            self.logger.log(level, message)

    def info(self, message: str) -> None:
        self.log(message)

    def debug(self, message: str) -> None:
        self.log(message, level=logging.DEBUG)

    def error(self, message: str) -> None:
        self.log(message, level=logging.ERROR)

    def warning(self, message: str) -> None:
        self.log(message, level=logging.WARN)

if __name__ == "__main__":
    lg = Logger("test.log")
    lg.info("hello")
    lg.info("hello")
    lg.warning("only one hello above")
