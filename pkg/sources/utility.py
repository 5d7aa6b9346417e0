from fractions import Fraction
from colorama import Fore
from termcolor import colored
import platform
import threading
import itertools
import time

spinner_event = threading.Event()
current_spinner_thread = None

def get_color_map():
    color_map = {
        "success": "green",
        "failure": "red",
        "status": "light_green",
        "code": "light_blue",
        "warning": "yellow",
        "output": "cyan",
        "info": "cyan"
    }
    if platform.system().lower() == "windows":
        color_map["info"] = "black"
    return color_map

def stop_spinner():
    spinner_event.set()
    if current_spinner_thread and current_spinner_thread.is_alive():
        current_spinner_thread.join()
    spinner_event.clear()

def pretty_print(text, color="info", no_newline=False):
    """
    Print text with color formatting.

    Args:
        text (str): The text to print
        color (str, optional): The color to use. Defaults to "info".
            Valid colors are:
            - "success": Green
            - "failure": Red
            - "status": Light green
            - "code": Light blue
            - "warning": Yellow
            - "output": Cyan
            - "info": Cyan (black on Windows)
    """
    stop_spinner()
    color_map = get_color_map()
    if color not in color_map:
        color = "info"
    print(colored(text, color_map[color]), end='' if no_newline else "\n")

def animate_search(text, color="status", duration=600):
    """
    Show a spinner on a daemon thread while a long search runs.
    Any later pretty_print call stops it.
    """
    global current_spinner_thread
    stop_spinner()

    def _animate():
        fore_colors = {
            "success": Fore.GREEN,
            "failure": Fore.RED,
            "status": Fore.LIGHTGREEN_EX,
            "warning": Fore.YELLOW,
            "info": Fore.CYAN,
        }
        fore_color = fore_colors.get(color, Fore.RESET)
        spinner = itertools.cycle(['|', '/', '-', '\\'])
        end_time = time.time() + duration
        while not spinner_event.is_set() and time.time() < end_time:
            print(f"\r{fore_color}{next(spinner)} {text}{Fore.RESET}", end="", flush=True)
            time.sleep(0.2)
        print("\r" + " " * (len(text) + 4) + "\r", end="", flush=True)
    current_spinner_thread = threading.Thread(target=_animate, daemon=True)
    current_spinner_thread.start()

def timer_decorator(func):
    """
    Decorator to measure the execution time of a function.
    Usage:
    @timer_decorator
    def my_function():
        # code to execute
    """
    from time import perf_counter
    def wrapper(*args, **kwargs):
        start_time = perf_counter()
        result = func(*args, **kwargs)
        end_time = perf_counter()
        pretty_print(f"{func.__name__} took {end_time - start_time:.2f} seconds to execute", "status")
        return result
    wrapper.__name__ = func.__name__
    wrapper.__doc__ = func.__doc__
    return wrapper

def exact_str(value) -> str:
    """Render an int or Fraction exactly, rationals as p/q."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return str(value)

if __name__ == "__main__":
    pretty_print("starting imaginary search", "success")
    animate_search("Searching...", "status")
    time.sleep(2)
    pretty_print(f"bound {exact_str(Fraction(1, 729))}", "info")
