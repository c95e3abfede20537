# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Additional tools to support pydantic usage in yamabench.
"""

from typing import Any, Dict, List, Union

try:
    # Annotated is only available in typing for Python >=3.9.
    from typing import Annotated
except ImportError:
    from typing_extensions import Annotated

import numpy
from pandas import DataFrame
from pydantic_core import core_schema
from pydantic import GetCoreSchemaHandler, TypeAdapter

__all__ = ['PydanticDataFrame', 'frame_to_records', 'frame_from_records']


_records_adapter = TypeAdapter(Dict[str, List[Any]])


def _plain(value: Any) -> Union[str, int, float, bool, None]:
    """
    Convert numpy scalars to the corresponding Python builtins.
    """
    if isinstance(value, numpy.generic):
        return value.item()
    return value


def frame_to_records(frame: DataFrame) -> Dict[str, List[Any]]:
    """
    Serialise a table as ``{'columns': [...], 'data': [[...], ...]}``.

    The index is not stored; tables in yamabench carry all their data in
    named columns.
    """
    return {
        'columns': [str(c) for c in frame.columns],
        'data': [[_plain(v) for v in row] for row in frame.itertuples(index=False, name=None)],
    }


def frame_from_records(value: Dict[str, List[Any]]) -> DataFrame:
    """
    Inverse of :func:`frame_to_records`.
    """
    records = _records_adapter.validate_python(value)
    if set(records) != {'columns', 'data'}:
        raise ValueError(f'Table records need "columns" and "data", got {sorted(records)}')
    return DataFrame(records['data'], columns=records['columns'])


class _DataFrameAnnotation:
    """
    Annotation class for pandas.DataFrame.

    This follows the pydantic recipe for third-party types
    (https://docs.pydantic.dev/latest/concepts/types/#handling-third-party-types)
    so that result tables can live inside pydantic models.
    """

    @classmethod
    def __get_pydantic_core_schema__(
        cls,
        _source_type: Any,
        _handler: GetCoreSchemaHandler,
    ) -> core_schema.CoreSchema:
        from_dict_schema = core_schema.chain_schema(
            [
                core_schema.dict_schema(),
                core_schema.no_info_plain_validator_function(frame_from_records),
            ]
        )

        return core_schema.json_or_python_schema(
            json_schema=from_dict_schema,
            python_schema=core_schema.union_schema(
                [
                    core_schema.is_instance_schema(DataFrame),
                    from_dict_schema,
                ]
            ),
            serialization=core_schema.plain_serializer_function_ser_schema(frame_to_records),
        )


#: Annotated wrapper for DataFrame. This can be used to support
#: pandas.DataFrame objects in a pydantic class with automatic serialisation
#: and validation.
PydanticDataFrame = Annotated[DataFrame, _DataFrameAnnotation]
