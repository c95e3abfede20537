# (C) Copyright 2024- yamabench contributors.
# This software is licensed under the terms of the Apache Licence Version 2.0
# which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.

"""
Pydantic base classes used for every configuration and record object.
"""

import json
from pathlib import Path
from typing import Any, ClassVar, Dict, List, Type, Union
from typing_extensions import Annotated, Literal, TypeAliasType

from pydantic import BaseModel, ConfigDict, Field, model_validator, TypeAdapter, model_serializer
from pydantic.fields import FieldInfo
from pydantic_core.core_schema import (
    SerializationInfo,
    SerializerFunctionWrapHandler,
    ValidatorFunctionWrapHandler,
)


__all__ = ['SubclassableSerialisationMixin', 'SerialisationMixin', 'CLASSNAME', 'RESERVED_NAMES']

# CLASSNAME is the configuration key that selects the concrete subclass of a
# SubclassableSerialisationMixin hierarchy; it cannot be used as a member name.
CLASSNAME = 'class_name'
RESERVED_NAMES = [
    CLASSNAME,
]

# Recursive alias restricting dumped configurations to plain JSON types.
_Plain = TypeAliasType(
    '_Plain',
    'Union[Dict[str, _Plain], List[_Plain], str, int, float, bool, None]',
)
_plain_adapter = TypeAdapter(Dict[str, _Plain])


class SerialisationMixin(BaseModel):
    """
    Mixin class that enables automatic serialisation features for this class.

    All attributes must be defined with typehints. Fields may carry an alias
    (for example ``lambda``, which is not a valid Python name); configurations
    accept either the alias or the field name and are always dumped with the
    alias.
    """

    model_config = ConfigDict(
        use_enum_values=True,
        validate_assignment=True,
        populate_by_name=True,
        arbitrary_types_allowed=True,
    )

    @classmethod
    def from_config(
        cls, config: Dict[str, Union[str, float, int, bool, List, None]]
    ) -> 'SerialisationMixin':
        """Create instance based on config.

        Args:
            config: names and values for member variables.

        Returns:
            class instance
        """
        adapter = TypeAdapter(cls)
        return adapter.validate_python(config)

    @classmethod
    def from_json_file(cls, path: Union[str, Path]) -> 'SerialisationMixin':
        """Create instance from a JSON document on disk."""
        with Path(path).open('r', encoding='utf-8') as f:
            return cls.from_config(json.load(f))

    def dump_config(
        self, with_class: bool = False, exclude_none: bool = True
    ) -> Dict[str, Union[str, float, int, bool, List, None]]:
        """Get configuration for output.

        Args:
            with_class: Add/keep CLASSNAME key with class name to configuration.
            exclude_none: Drop members that are ``None``.

        Returns:
            Configuration that can be used to create instance.
        """
        config = self.model_dump(
            mode='json', by_alias=True, exclude_none=exclude_none, round_trip=True
        )

        if with_class:
            config[CLASSNAME] = type(self).__name__
        else:
            config.pop(CLASSNAME, None)

        return _plain_adapter.validate_python(config)

    def to_json(self, path: Union[str, Path, None] = None, **kwargs) -> str:
        """
        Serialise :meth:`dump_config` to an indented JSON string and
        optionally write it to ``path``.
        """
        text = json.dumps(self.dump_config(**kwargs), indent=2) + '\n'
        if path is not None:
            Path(path).write_text(text, encoding='utf-8')
        return text

    # pydantic's own copy is deprecated, so we provide a stable one.
    # pylint: disable=W0221
    def copy(self, deep: bool = False) -> 'SerialisationMixin':
        """
        Create a copy of this object.

        Args:
            deep: If True, create a deep copy.
        """

        return self.model_copy(deep=deep)


class SubclassableSerialisationMixin(SerialisationMixin):
    """
    Mixin class that enables serialisation of class hierarchies.

    Configurations of a base class are dispatched to the subclass named by
    their ``CLASSNAME`` entry, so a field typed with the base class, e.g.

    .. code-block::

        class SequenceRule(SubclassableSerialisationMixin): ...


        class GeometricSequence(SequenceRule): ...


        class Params(SerialisationMixin):
            eps_rule: SequenceRule

    round-trips whichever subclass it holds.
    """

    _subclasses: ClassVar[Dict[str, Type[Any]]] = {}
    _discriminating_type_adapter: ClassVar[TypeAdapter]

    @classmethod
    def _get_abstract_dataclass(cls) -> Type:
        """
        Return the first class in the MRO that directly derives from
        SubclassableSerialisationMixin.
        """
        for candidate in cls.__mro__:
            if SubclassableSerialisationMixin in candidate.__bases__:
                return candidate
        return None

    @model_serializer(mode='wrap')
    def _serialize_model(
        self, handler: SerializerFunctionWrapHandler, info: SerializationInfo
    ) -> Any:
        """
        Serialise with the runtime class rather than the declared field type.

        pydantic serialises a field by its annotation, which would drop the
        members of a subclass. We call ``model_dump`` on the object itself and
        mark the object in the serialisation context to stop the recursion.
        """
        context = dict(info.context) if isinstance(info.context, dict) else {}
        active = set(context.get('_active', ()))

        if id(self) in active:
            return handler(self)

        context['_active'] = active | {id(self)}

        options = {}
        for key in [
            'mode',
            'by_alias',
            'exclude_unset',
            'exclude_defaults',
            'exclude_none',
            'round_trip',
        ]:
            if hasattr(info, key):
                options[key] = getattr(info, key)

        return self.model_dump(**options, context=context)

    @model_validator(mode='wrap')
    @classmethod
    def _parse_into_subclass(
        cls, v: Any, handler: ValidatorFunctionWrapHandler
    ) -> 'SubclassableSerialisationMixin':
        """
        Recover the concrete subclass from its ``CLASSNAME`` entry.
        """
        abstract_cls = cls._get_abstract_dataclass()

        if cls is abstract_cls:
            return abstract_cls._discriminating_type_adapter.validate_python(v)

        return handler(v)

    @classmethod
    def __pydantic_init_subclass__(cls, **kwargs):
        """
        Register every new subclass and give it a ``CLASSNAME`` literal field.
        """
        cls.model_fields[CLASSNAME] = FieldInfo(
            annotation=Literal[cls.__name__], default=cls.__name__
        )
        cls.model_rebuild(force=True)

        abstract_cls = cls._get_abstract_dataclass()

        if cls is abstract_cls:
            # Each hierarchy keeps its own registry.
            cls._subclasses = {}
        else:
            abstract_cls._subclasses[cls.__qualname__] = cls

            abstract_cls._discriminating_type_adapter = TypeAdapter(
                Annotated[
                    Union[tuple(abstract_cls._subclasses.values())],
                    Field(discriminator=CLASSNAME),
                ]
            )
