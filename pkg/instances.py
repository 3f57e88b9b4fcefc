"""
Instance files: JSON descriptions of global bodies.

    {"name": str, "valuation_dim": int, "class_dim": int, "rays": [[int, ...], ...]}

or with "inequalities" (a.x >= 0) in place of "rays". Entries are integers
only. The fixed instances live in instances/.
"""

import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from errors import InputError, InstanceError, MalformedInstanceError
from okounkov_core import GlobalBody

logger = logging.getLogger(__name__)

INSTANCE_DIR = Path(__file__).parent / 'instances'

FAMILIES = ('interval', 'twochamber', 'simplex_product', 'random')
MAX_RANDOM_RAYS = 12
MAX_RANDOM_COEFF = 8
MAX_RANDOM_ATTEMPTS = 1000

INTERVAL_RAYS = ((0, 1), (1, 1))
TWOCHAMBER_RAYS = ((0, 1, 0), (1, 1, 0), (0, 0, 1), (2, 1, 1))


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


@dataclass(frozen=True)
class InstanceFile:
    name: str
    valuation_dim: int
    class_dim: int
    rays: Optional[Tuple[Tuple[int, ...], ...]] = None
    inequalities: Optional[Tuple[Tuple[int, ...], ...]] = None

    @classmethod
    def from_json(cls, data) -> 'InstanceFile':
        """Check the structure of decoded JSON; the geometry is checked by to_body"""
        if not isinstance(data, dict):
            raise MalformedInstanceError("instance must be a JSON object", datum=data)
        unknown = set(data) - {'name', 'valuation_dim', 'class_dim', 'rays', 'inequalities'}
        if unknown:
            raise MalformedInstanceError(f"unknown keys {sorted(unknown)}", datum=sorted(unknown))
        name = data.get('name', '')
        if not isinstance(name, str):
            raise MalformedInstanceError("'name' must be a string", datum='name')
        for key in ('valuation_dim', 'class_dim'):
            if key not in data:
                raise MalformedInstanceError(f"missing key '{key}'", datum=key)
            if not _is_int(data[key]) or data[key] < 1:
                raise MalformedInstanceError(f"'{key}' must be an integer >= 1", datum=key)
        if ('rays' in data) == ('inequalities' in data):
            raise MalformedInstanceError("exactly one of 'rays' and 'inequalities' is required",
                                         datum='rays' if 'rays' in data else 'inequalities')
        key = 'rays' if 'rays' in data else 'inequalities'
        width = data['valuation_dim'] + data['class_dim']
        vectors = data[key]
        if not isinstance(vectors, list):
            raise MalformedInstanceError(f"'{key}' must be a list of integer vectors", datum=key)
        for v in vectors:
            if not isinstance(v, list) or len(v) != width or not all(_is_int(x) for x in v):
                raise MalformedInstanceError(f"entry of '{key}' is not an integer vector of length {width}", datum=v)
            if key == 'rays' and not any(v):
                raise MalformedInstanceError("zero vector among the rays", datum=v)
        vectors = tuple(tuple(v) for v in vectors)
        return cls(name, data['valuation_dim'], data['class_dim'], **{key: vectors})

    def to_json(self) -> str:
        data = {'name': self.name, 'valuation_dim': self.valuation_dim, 'class_dim': self.class_dim}
        if self.rays is not None:
            data['rays'] = [list(r) for r in self.rays]
        else:
            data['inequalities'] = [list(a) for a in self.inequalities]
        return json.dumps(data, indent=2)

    def to_body(self) -> GlobalBody:
        if self.rays is not None:
            return GlobalBody.from_rays(self.valuation_dim, self.class_dim, self.rays, self.name)
        return GlobalBody.from_ineqs(self.valuation_dim, self.class_dim, self.inequalities, self.name)


def read_instance(text: str) -> InstanceFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInstanceError(f"invalid JSON: {exc}") from exc
    return InstanceFile.from_json(data)


def parse_instance(text: str) -> GlobalBody:
    return read_instance(text).to_body()


def _random_rays(rng: random.Random, n: int, rho: int, count: int, max_coeff: int) -> List[Tuple[int, ...]]:
    rays = []
    while len(rays) < count:
        ray = tuple(rng.randint(0, max_coeff) for _ in range(n + rho))
        if any(ray[n:]):
            rays.append(ray)
    return rays


def _param(params: Dict, key: str, default=None) -> int:
    value = params.get(key, default)
    if not _is_int(value) or value < 1:
        raise InputError(f"parameter '{key}' must be a positive integer, got {value!r}")
    return value


def generate_instance(family: str, params: Optional[Dict] = None, seed: int = 0) -> InstanceFile:
    """
    Emit an instance of one of the families.

    Args:
        family: 'interval', 'twochamber', 'simplex_product' (params n, scale)
            or 'random' (params n, rho, rays <= 12, max_coeff <= 8)
        params: Family parameters
        seed: Only used by 'random'; the seed is incremented until the rays
            describe a valid global body

    Returns:
        InstanceFile: Validated instance
    """
    params = params or {}
    if family == 'interval':
        return InstanceFile('interval', 1, 1, rays=INTERVAL_RAYS)
    if family == 'twochamber':
        return InstanceFile('twochamber', 1, 2, rays=TWOCHAMBER_RAYS)
    if family == 'simplex_product':
        n, s = _param(params, 'n', 2), _param(params, 'scale', 1)
        rays = [(0,) * n + (1,)] + [tuple(s if k == i else 0 for k in range(n)) + (1,) for i in range(n)]
        return InstanceFile(f'simplex_product_{n}_{s}', n, 1, rays=tuple(rays))
    if family == 'random':
        n, rho = _param(params, 'n', 2), _param(params, 'rho', 2)
        count, max_coeff = _param(params, 'rays', 6), _param(params, 'max_coeff', 4)
        if count > MAX_RANDOM_RAYS or max_coeff > MAX_RANDOM_COEFF:
            raise InputError(f"random instances allow at most {MAX_RANDOM_RAYS} rays "
                             f"and coefficients up to {MAX_RANDOM_COEFF}")
        for attempt in range(MAX_RANDOM_ATTEMPTS):
            rng = random.Random(seed + attempt)
            rays = tuple(_random_rays(rng, n, rho, count, max_coeff))
            instance = InstanceFile(f'random_{n}_{rho}_{count}_{max_coeff}_s{seed}', n, rho, rays=rays)
            try:
                instance.to_body()
            except InstanceError as exc:
                logger.debug("seed %d rejected: %s", seed + attempt, exc.reason)
                continue
            return instance
        raise InputError(f"no valid random instance after {MAX_RANDOM_ATTEMPTS} seeds starting at {seed}")
    raise InputError(f"unknown family {family!r}, expected one of {', '.join(FAMILIES)}")


def load_instance(path: Path) -> GlobalBody:
    with open(path, 'r', encoding='utf-8') as f:
        instance = read_instance(f.read())
    if not instance.name:
        instance = InstanceFile(path.stem, instance.valuation_dim, instance.class_dim,
                                instance.rays, instance.inequalities)
    return instance.to_body()


def load_instances(path) -> List[GlobalBody]:
    """A single instance file, or every *.json file of a directory sorted by file name"""
    path = Path(path)
    if path.is_dir():
        files = sorted(path.glob('*.json'))
    elif path.is_file():
        files = [path]
    else:
        raise InputError(f"no such instance file or directory: {path}")
    return [load_instance(p) for p in files]
