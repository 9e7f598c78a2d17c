# app/core/__init__.py - Paquete de configuración y utilidades centrales