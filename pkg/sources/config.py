import os
import configparser

from dotenv import load_dotenv

load_dotenv()

DEFAULTS = {
    'MAIN': {
        'log_dir': '.logs',
        'log_enabled': 'True',
    },
    'SEARCH': {
        'max_nodes': '50000000',
        'max_millis': '300000',
        'threads': '1',
    },
    'CONSTRUCTIONS': {
        'sum_tuple_max_candidates': '100000',
        'sum_tuple_max_millis': '60000',
    },
    'PROBFIELD': {
        'prime_cap': '2147483648',
        'lattice_cap': '10000000',
        'behrend_verify_cap': '60',
        'exhaustive_prime_limit': '200',
        'greedy_prime_limit': '100000',
        'behrend_max_nodes': '2000000',
        'probe_cap': '5000000',
        'span_prime': '7',
    },
    'MULTILINEAR': {
        'field_prime': '2305843009213693951',
        'max_retries': '16',
        'eager_check_cap': '5000',
        'spot_check_probes': '8',
    },
}

def load_config(path: str = None) -> configparser.ConfigParser:
    """
    Load the ini configuration on top of the built-in defaults.
    Args:
        path: ini file to read, defaults to $RAINBOWSEEK_CONFIG or ./config.ini
    Returns:
        configparser.ConfigParser: the merged configuration
    """
    parser = configparser.ConfigParser()
    parser.read_dict(DEFAULTS)
    path = path or os.getenv('RAINBOWSEEK_CONFIG', 'config.ini')
    parser.read(path)
    return parser

config = load_config()
