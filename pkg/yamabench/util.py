# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Collection of utility routines
"""

from concurrent.futures import ThreadPoolExecutor
import hashlib
import json
import sys
from typing import Any, Callable, Iterable, List, Optional, TypeVar

from yamabench.logging import debug


__all__ = [
    'as_tuple',
    'auto_post_mortem_debugger',
    'config_hash',
    'parallel_map',
    'parse_float_list',
    'set_max_threads',
]

T = TypeVar('T')
R = TypeVar('R')

# Upper bound for the number of worker threads, set from the CLI ``--threads``.
_MAX_THREADS = 1


def set_max_threads(threads: int):
    """
    Cap the number of worker threads used by :func:`parallel_map`.
    """
    global _MAX_THREADS  # pylint: disable=global-statement
    if threads < 1:
        raise ValueError(f'Thread count must be positive, got {threads}')
    _MAX_THREADS = int(threads)


def parallel_map(
    func: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None
) -> List[R]:
    """
    Apply ``func`` to every item and return the results in input order.

    Work items are independent, so the results do not depend on the number of
    threads; only the wall time does.

    Parameters
    ----------
    func : callable
        The function to apply.
    items : iterable
        The work items.
    threads : int, optional
        Number of worker threads (default: the value set by :func:`set_max_threads`).
    """
    items = list(items)
    threads = _MAX_THREADS if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    debug(f'[yamabench] Mapping {len(items)} work items over {threads} threads')
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def config_hash(config: Any) -> str:
    """
    SHA-256 of the canonical JSON form of a configuration dictionary.
    """
    text = json.dumps(config, sort_keys=True, separators=(',', ':'), default=str)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def parse_float_list(text: Optional[str]) -> Optional[List[float]]:
    """
    Parse a comma-separated list of numbers such as ``'0.1,0.3,0.5'``.
    """
    if text is None:
        return None
    values = [item.strip() for item in text.split(',')]
    try:
        return [float(item) for item in values if item]
    except ValueError as ex:
        raise ValueError(f'Could not parse number list {text!r}') from ex


def as_tuple(item, dtype=None, length=None):
    """
    Force item to a tuple, even if `None` is provided.
    """
    # Stop complaints about `type` in this function
    # pylint: disable=redefined-builtin

    # Empty list if we get passed None
    if item is None:
        t = ()
    elif isinstance(item, str):
        t = (item,)
    else:
        # Convert iterable to list...
        try:
            t = tuple(item)
        # ... or create a list of a single item
        except (TypeError, NotImplementedError):
            t = (item,) * (length or 1)
    if length and not len(t) == length:
        raise ValueError(f'Tuple needs to be of length {length: d}')
    if dtype and not all(isinstance(i, dtype) for i in t):
        raise TypeError(f'Items need to be of type {dtype}')
    return t


def auto_post_mortem_debugger(type, value, tb):  # pylint: disable=redefined-builtin
    """
    Exception hook that automatically attaches a debugger

    Activate by setting ``sys.excepthook = auto_post_mortem_debugger``
    """
    is_interactive = hasattr(sys, 'ps1')
    no_tty = not sys.stderr.isatty() or not sys.stdin.isatty() or not sys.stdout.isatty()
    if is_interactive or no_tty or type == SyntaxError:
        # we are in interactive mode or we don't have a tty-like
        # device, so we call the default hook
        sys.__excepthook__(type, value, tb)
    else:
        import traceback  # pylint: disable=import-outside-toplevel
        import pdb  # pylint: disable=import-outside-toplevel

        # we are NOT in interactive mode, print the exception...
        traceback.print_exception(type, value, tb)
        # ...then start the debugger in post-mortem mode.
        pdb.post_mortem(tb)  # pylint: disable=no-member
