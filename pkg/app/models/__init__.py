# app/models/__init__.py - Paquete de modelos algebraicos
