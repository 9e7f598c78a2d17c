# app/schemas/__init__.py - Paquete de esquemas Pydantic para validación