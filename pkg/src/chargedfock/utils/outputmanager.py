import os
import sys
import logging


FORMAT = "%(asctime)s;%(levelname)s;%(message)s"
DATEFMT = "%Y-%m-%d %H:%M:%S"


class OutputManager:
    def __init__(self):
        self.output_dir: str = None
        self.log_file_name: str = None
        self.log_level: int = logging.INFO
        self.initialized = False
        self.output_dir_created = False

    def initialize(self):
        if self.initialized:
            return

        handlers = [logging.StreamHandler(sys.stderr)]
        if self.log_file_name is not None:
            self.make_output_dir()
            log_file_path = os.path.join(self.output_dir or ".", self.log_file_name)
            handlers.append(logging.FileHandler(log_file_path))
        logging.basicConfig(level=self.log_level,
                            format=FORMAT,
                            datefmt=DATEFMT,
                            handlers=handlers,
                            force=True)

        self.initialized = True

    def reset(self):
        self.initialized = False

    def make_output_dir(self):
        if self.output_dir_created or self.output_dir is None:
            return
        os.makedirs(self.output_dir, exist_ok=True)
        self.output_dir_created = True

    def set_output_dir(self, output_dir: str):
        self.output_dir = output_dir
        self.output_dir_created = False
        self.reset()

    def set_log_level(self, log_level: int):
        self.log_level = log_level
        self.reset()

    def set_log_file_name(self, log_file_name: str):
        self.log_file_name = log_file_name
        self.reset()

    def debug(self, *msg):
        self.initialize()
        logging.debug(" ".join([str(x) for x in msg]))

    def info(self, *msg):
        self.initialize()
        logging.info(" ".join([str(x) for x in msg]))

    def warning(self, *msg):
        self.initialize()
        logging.warning(" ".join([str(x) for x in msg]))

    def error(self, *msg):
        self.initialize()
        logging.error(" ".join([str(x) for x in msg]))

    def critical(self, *msg):
        self.initialize()
        logging.critical(" ".join([str(x) for x in msg]))


root = OutputManager()

LOG_LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
    "CRITICAL": logging.CRITICAL,
}


def basicConfig(**kwargs):
    output_dir = kwargs.pop("output_dir", None)
    if output_dir is not None:
        root.set_output_dir(output_dir)

    log_level = kwargs.pop("log_level", None)
    if log_level is not None:
        if isinstance(log_level, str):
            log_level = LOG_LEVELS.get(log_level.upper(), logging.INFO)
        root.set_log_level(log_level)

    log_file_name = kwargs.pop("log_file_name", None)
    if log_file_name is not None:
        root.set_log_file_name(log_file_name)

def debug(*msg):
    root.debug(*msg)

def info(*msg):
    root.info(*msg)

def warning(*msg):
    root.warning(*msg)

def error(*msg):
    root.error(*msg)

def critical(*msg):
    root.critical(*msg)
