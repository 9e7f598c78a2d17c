# app/api/__init__.py - Paquete de API