# app/services/__init__.py - Paquete de servicios de lógica de negocio