"""HDF5 store for the expensive character-polynomial intermediates."""
import hashlib
import pathlib
import threading

import h5py

from . import utils
from .utils import cache_info, message


def _digest(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def dataset_name(n, stage):
    return f"n{int(n):03d}/{stage}"


class IntermediateCache:
    """Polynomial texts of p1, p2, p and f_tilde keyed by n.

    Entries carry the cache format version and a sha256 of their text. A
    version mismatch is treated as a miss; a digest mismatch is reported and
    treated as a miss so the caller recomputes and overwrites the entry.

    Args:
        cache_dir (str or pathlib.Path, optional): directory holding the
            HDF5 file. Defaults to ``$CHARVAR_CACHE`` or ``~/.cache/charvartools``.
        file_name (str, optional): Defaults to ``cache_info["file_name"]``.
    """

    def __init__(self, cache_dir=None, file_name=None):
        if cache_dir is None:
            cache_dir = cache_info["cache_dir"]
        self.cache_dir = pathlib.Path(cache_dir).expanduser().resolve()
        self.file_name = file_name or cache_info["file_name"]
        self.version = cache_info["format_version"]
        self._lock = threading.Lock()

    @property
    def path(self):
        return self.cache_dir / self.file_name

    def _check_stage(self, stage):
        if stage not in cache_info["stages"]:
            raise KeyError(f"Unknown cache stage '{stage}', expected one of {cache_info['stages']}")

    def load(self, n, stage):
        """Return the stored text for (n, stage), or None on a miss.

        Args:
            n (int): surgery index
            stage (str): one of ``cache_info["stages"]``

        Returns:
            str or None: polynomial text
        """
        self._check_stage(stage)
        if not self.path.exists():
            return None
        name = dataset_name(n, stage)
        try:
            with h5py.File(self.path, "r") as h5file:
                if name not in h5file:
                    return None
                dset = h5file[name]
                version = str(dset.attrs.get("version", ""))
                value = dset[()]
                digest = str(dset.attrs.get("sha256", ""))
        except (OSError, KeyError, TypeError) as err:
            message(f"Cache file {self.path} is unreadable ({err}), recomputing", message_verbosity=1)
            return None
        if version != self.version:
            message(f"Cache entry {name} has an old format version, ignoring", message_verbosity=2)
            return None
        if isinstance(value, bytes):
            value = value.decode("utf-8")
        if digest != _digest(value):
            message(
                f"Cache entry {name} in {self.path} failed its integrity check, recomputing",
                message_verbosity=1,
            )
            return None
        return value

    def _open_for_write(self):
        try:
            return h5py.File(self.path, "a")
        except OSError as err:
            corrupt = self.path.with_name(self.path.name + ".corrupt")
            message(f"Cache file {self.path} is unreadable ({err}), moving it to {corrupt}", message_verbosity=1)
            self.path.replace(corrupt)
            return h5py.File(self.path, "w")

    def store(self, n, stage, text):
        self._check_stage(stage)
        name = dataset_name(n, stage)
        with self._lock:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            with self._open_for_write() as h5file:
                if name in h5file:
                    del h5file[name]
                dset = h5file.create_dataset(name, data=str(text), dtype=h5py.string_dtype("utf-8"))
                dset.attrs["version"] = self.version
                dset.attrs["sha256"] = _digest(str(text))
        message(f"Cached {name} in {self.path}", message_verbosity=3)

    def load_all(self, n):
        """Stored texts for every stage of n; missing stages are omitted."""
        found = {}
        for stage in cache_info["stages"]:
            value = self.load(n, stage)
            if value is not None:
                found[stage] = value
        return found

    def store_all(self, n, values):
        for stage, text in values.items():
            self.store(n, stage, text)

    def cache_io(self, key, value=None):
        """Load ``key = (n, stage)`` when ``value`` is None, otherwise store it."""
        n, stage = key
        if value is None:
            return self.load(n, stage)
        self.store(n, stage, value)
        return value


def default_cache(cache_dir=None, enabled=True):
    """An IntermediateCache, or None when caching is switched off."""
    if not enabled:
        return None
    return IntermediateCache(cache_dir if cache_dir is not None else utils.charvar_cache_dir)
