# app/repositories/__init__.py - Paquete de repositorios en memoria (biblioteca de modelos, caché de complejos)
