# app/repositories/base_repository.py - Repositorio base en memoria para evitar duplicación

from typing import Callable, Dict, Generic, Hashable, TypeVar

T = TypeVar("T")


class BaseRepository(Generic[T]):
    """Almacén por clave de objetos construidos una sola vez"""

    def __init__(self):
        """Inicializar repositorio base"""
        self._items: Dict[Hashable, T] = {}

    def create(self, key: Hashable, item: T) -> T:
        """Registrar un nuevo objeto"""
        self._items[key] = item
        return item

    def get_or_create(self, key: Hashable, factory: Callable[[], T]) -> T:
        """Obtener por clave o construir y registrar"""
        item = self._items.get(key)
        if item is None:
            item = self.create(key, factory())
        return item
