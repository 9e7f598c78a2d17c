# app/__init__.py - Paquete principal de la aplicación