# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Utilities for loading YAML and JSON configuration files.
"""

import copy
import os
from pathlib import Path
from typing import Any, Dict, List, Union

import yaml


__all__ = ['read_yaml', 'read_config', 'preset_path', 'available_presets', 'PRESET_DIR']

#: Directory holding the JSON presets shipped with the package.
PRESET_DIR = Path(__file__).parent / 'presets'


class _TemplateRef:
    """
    A ``!configure`` node, resolved once the whole document is loaded.
    """

    def __init__(self, template_path, overrides):
        self.template_path = template_path
        self.overrides = overrides


def _make_loader(base_dir, encoding):
    """
    Create a YAML loader with ``!include`` and ``!configure`` constructors
    that resolve paths relative to *base_dir*.
    """

    # pylint: disable=R0901
    class _Loader(yaml.SafeLoader):
        pass

    def _include_constructor(loader, node):
        """
        Handle ``!include other_file.json``.

        Raises ValueError if the include path escapes *base_dir*.
        Raises FileNotFoundError if the file does not exist.
        """
        rel_path = loader.construct_scalar(node)

        # normpath removes ../ components without resolving symlinks.
        include_path = Path(os.path.normpath(base_dir / rel_path))

        try:
            path_diff = include_path.relative_to(base_dir)
            if str(path_diff).startswith('..'):
                raise ValueError
        except ValueError:
            # pylint: disable=W0707
            raise ValueError('The !include path must be relative to the main configuration file!')

        if not include_path.is_file():
            raise FileNotFoundError(f'Included file not found: {include_path}')

        return read_yaml(str(include_path), encoding)

    def _configure_constructor(loader, tag_suffix, node):
        """Handle ``!configure:path/to/template`` mapping nodes."""
        return _TemplateRef(tag_suffix.lstrip(':'), loader.construct_mapping(node, deep=True))

    _Loader.add_constructor('!include', _include_constructor)
    _Loader.add_multi_constructor('!configure:', _configure_constructor)

    return _Loader


def _lookup(root, template_path):
    current = root
    for key in template_path.split('/'):
        try:
            current = current[key]
        except (KeyError, TypeError) as ex:
            raise KeyError(f'Template path {template_path!r} not found in configuration') from ex
    return current


def _substitute(obj, overrides):
    """
    Replace ``${key}`` placeholders inside *obj* by the values in *overrides*.

    A string that is exactly one placeholder takes the override value with its
    type, so ``n: ${n}`` stays an integer.
    """
    if isinstance(obj, str):
        for key, value in overrides.items():
            if obj == f'${{{key}}}':
                return value
        for key, value in overrides.items():
            obj = obj.replace(f'${{{key}}}', str(value))
        return obj
    if isinstance(obj, dict):
        return {k: _substitute(v, overrides) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_substitute(item, overrides) for item in obj]
    return obj


def _resolve_templates(obj, root):
    if isinstance(obj, _TemplateRef):
        template = copy.deepcopy(_lookup(root, obj.template_path))
        return _substitute(template, obj.overrides)
    if isinstance(obj, dict):
        return {k: _resolve_templates(v, root) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_resolve_templates(item, root) for item in obj]
    return obj


def read_yaml(filename: Union[str, Path], encoding='utf-8') -> Any:
    """
    Parse a YAML (or JSON) file and return the resulting data.

    JSON documents are valid YAML, so JSON configuration files and presets go
    through the same loader. In addition to standard YAML this supports

      * ``!include`` (inserts the content of another file, given relative
        to the including one)
      * ``!configure:reference`` (copies another block of the document and
        replaces ``${name}`` entries with the given values)

    Parameters
    ----------
    filename: str or Path
        The path to the file.
    encoding: str
        The encoding that is used when opening the file.

    Raises
    ------
    FileNotFoundError
        If *filename* or any ``!include``-ed file does not exist.

    Example
    -------
        templates:
          unbounded:
            construction: A
            n: ${n}
            K_max: 5

        construction: !configure:templates/unbounded
          n: 4
        r_list: !include radii.json
    """

    filepath = Path(filename).resolve()
    if not filepath.is_file():
        raise FileNotFoundError(f'Configuration file not found: {filepath}')

    loader_cls = _make_loader(filepath.parent, encoding)

    with open(filepath, encoding=encoding) as fh:
        data = yaml.load(fh, Loader=loader_cls)

    return _resolve_templates(data, data)


def available_presets() -> List[str]:
    """
    Names of the presets shipped with yamabench.
    """
    return sorted(p.stem for p in PRESET_DIR.glob('*.json'))


def preset_path(name: str) -> Path:
    """
    Path of the preset called *name*.

    Raises
    ------
    ValueError
        If no such preset exists.
    """
    path = PRESET_DIR / f'{name}.json'
    if not path.is_file():
        raise ValueError(f'Unknown preset {name!r}, available: {", ".join(available_presets())}')
    return path


def read_config(
    config: Union[str, Path, None] = None, preset: Union[str, None] = None
) -> Dict[str, Any]:
    """
    Load a run configuration from a file, from a named preset, or both.

    When both are given, the top-level entries of the file override the preset.
    The ``templates`` block used by ``!configure`` is dropped from the result.
    """
    if config is None and preset is None:
        raise ValueError('Either a configuration file or a preset name is required')

    data = {}
    if preset is not None:
        data.update(read_yaml(preset_path(preset)))
    if config is not None:
        loaded = read_yaml(config)
        if not isinstance(loaded, dict):
            raise ValueError(
                f'Configuration in {config} must be a mapping, got {type(loaded).__name__}'
            )
        data.update(loaded)
    data.pop('templates', None)
    return data
