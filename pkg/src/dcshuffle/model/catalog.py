import json
import re
from dataclasses import dataclass
from dataclasses import field
from pathlib import Path
from typing import Dict
from typing import List
from typing import Optional

from dcshuffle.errors import InstanceError
from dcshuffle.model.instance import DcInstance
from dcshuffle.model.instance import gen_family
from dcshuffle.model.instance import load_instance_file

_FAMILY_TAG = re.compile(r"^family-(\d+)-(\d+)$")


@dataclass
class CatalogEntry:
    """Instance Catalog Entry

    A named instance, stored as its JSON descriptor.
    """

    #: Catalog ID
    tag: str
    title: str
    descriptor: str

    @property
    def instance(self) -> DcInstance:
        """Return the instance described by this entry"""
        return DcInstance.from_json(json.loads(self.descriptor))


@dataclass
class Catalog:
    """Instance Catalog

    Maps tags to `CatalogEntry` objects. Tags of the form ``family-K-r``
    that are not registered are generated on demand.
    """

    _entries: Dict[str, CatalogEntry] = field(default_factory=dict)

    def add_entry(self, tag: str, title: str, instance: DcInstance) -> None:
        """Add a new entry to the catalog."""
        if tag in self._entries:
            raise InstanceError(f"Error adding catalog entry: {tag} already exists")

        self._entries[tag] = CatalogEntry(
            tag=tag,
            title=title,
            descriptor=json.dumps(instance.to_json(), sort_keys=True),
        )

    def find(self, *, tag: Optional[str] = None) -> List[CatalogEntry]:
        """Search the catalog; ``tag`` matches substrings."""
        return [e for e in self._entries.values() if tag is None or tag in e.tag]

    def get(self, tag: str) -> DcInstance:
        """Instance with exactly this tag."""
        if tag in self._entries:
            return self._entries[tag].instance
        match = _FAMILY_TAG.match(tag)
        if match:
            return gen_family(int(match.group(1)), int(match.group(2)))
        raise InstanceError(f"Unknown catalog tag: {tag}")

    def resolve(self, source: str) -> DcInstance:
        """Load ``source`` as a JSON file path, falling back to a catalog tag."""
        path = Path(source)
        if path.is_file():
            return load_instance_file(path)
        try:
            return self.get(source)
        except InstanceError:
            raise InstanceError(f"{source} is neither an instance file nor a catalog tag") from None
