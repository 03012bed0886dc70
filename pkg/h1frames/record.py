from pathlib import Path
import importlib
from logging import warning
from typing import TYPE_CHECKING, Optional, Callable, Union, Any

from h5py import File as h5File
from h5py import Empty, Group
import numpy as np

from .utils.exceptions import NoRecordError

if TYPE_CHECKING:
    from .utils.types import PathLike

def _stored(f : Union[h5File, Group], key : str)->Any:
    """ Dataset or attribute `key`; absent keys and h5py Empty give None """
    if key in f.keys():
        value = f[key][()]
    else:
        value = f.attrs.get(key, None)
    return None if isinstance(value, Empty) else value

class GridRecord():
    """
    Superclass for computed grids (signatures, coefficients, invariants,
    metrics) that get written to disk as .h1rec HDF5 files and read back.

    Subclasses list the attributes to persist in SAVE_ATTRS. numpy arrays
    become datasets, anything else becomes a file attribute, and every
    name in SAVE_ATTRS must be accepted as a keyword by the subclass
    __init__ so that `load` can rebuild the object.
    """

    SAVE_ATTRS : list[str] = []
    FILE_EXTENSION : str = "h1rec"

    def __init__(
            self,
            name        : Optional[str] = None,
            info_string : Optional[str] = None,
            **kwargs,
        ):
        self._name = name
        self.info_string = info_string

    @property
    def name(self)->str:
        return "" if self._name is None else str(self._name)

    def save(self, save_path : 'PathLike')->Path:
        """
        Saves the record as an .h1rec file.

        Arguments
        ---------
        save_path : PathLike

            Either a file path ending in .h1rec or a directory. A directory
            gets a file named <Class>_<name>.h1rec.

        Returns
        -------
        path : Path

            Where the file ended up.
        """
        save_path = Path(save_path)
        if save_path.suffix != f".{self.__class__.FILE_EXTENSION}":
            stem = self.name if self.name else "unnamed"
            save_path = save_path / f"{self.__class__.__name__}_{stem}.{self.__class__.FILE_EXTENSION}"
        save_path.parent.mkdir(parents = True, exist_ok=True)

        def put_attr(f : h5File, attr : str, value : Any):
            """ None goes in as an h5py Empty """
            f.attrs[attr] = Empty("S1") if value is None else value

        with h5File(save_path, 'w') as f:
            put_attr(f, 'name', self._name)
            put_attr(f, 'info_string', self.info_string)

            f.attrs['class'] = self.__class__.__name__
            f.attrs['module'] = self.__class__.__module__

            for attr in self.__class__.SAVE_ATTRS:
                value = getattr(self, attr)
                if isinstance(value, np.ma.MaskedArray):
                    f.create_dataset(attr, data = value.filled(np.nan))
                elif isinstance(value, np.ndarray):
                    f.create_dataset(attr, data = value, dtype = value.dtype)
                else:
                    put_attr(f, attr, value)
        return save_path

    @classmethod
    def load(
            cls,
            load_path : 'PathLike',
            filter_condition : Optional[Callable[['GridRecord'], bool]] = None
        )->'GridRecord':
        """
        Reads a record back. The class named in the file is imported from
        the module it claims to come from; if that module is gone the
        class `load` was called on is used instead.

        If `filter_condition` is provided it receives the loaded record
        and must return True, otherwise NoRecordError is raised.
        """
        load_path = Path(load_path)
        if filter_condition is None:
            filter_condition = lambda x: True

        with h5File(load_path.with_suffix(f'.{cls.FILE_EXTENSION}'), 'r') as f:
            try:
                mod = importlib.import_module(f.attrs['module'])
                record_cls = getattr(mod, f.attrs['class'])
            except (ModuleNotFoundError, AttributeError):
                warning(
                    f"Class {f.attrs['module']}.{f.attrs['class']} not found. "
                    f"Loading as {cls.__name__}"
                )
                record_cls = cls

            kwargs = {
                attr : _stored(f, attr) for attr in record_cls.SAVE_ATTRS
                if attr in f.keys() or attr in f.attrs.keys()
            }

            record = record_cls(
                name = _stored(f, 'name'),
                info_string = _stored(f, 'info_string'),
                **kwargs,
            )

        if not filter_condition(record):
            raise NoRecordError("Record did not pass filter condition, was not loaded")
        return record

    def __repr__(self)->str:
        return f"{self.__class__.__name__} record named {self.name!r}"
