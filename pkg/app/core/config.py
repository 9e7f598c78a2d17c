# app/core/config.py - Configuración de la aplicación

from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Literal


class Settings(BaseSettings):
    """Configuración de la aplicación usando Pydantic"""

    model_config = SettingsConfigDict(
        env_prefix="DERIVHOM_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Configuración de la aplicación
    app_name: str = "derivhom"
    tool_version: str = "1.0.0"

    # Configuración de los cálculos
    default_format: Literal["text", "json"] = "text"
    window_headroom: int = 2  # ventana por defecto = 2·(grado máximo) + headroom
    max_degree_limit: int = 200  # una ventana mayor es un error, nunca se trunca
    report_timings: bool = False  # con False el JSON es idéntico entre ejecuciones

    # Configuración de logging
    log_level: str = "WARNING"

    # Configuración del servidor
    host: str = "0.0.0.0"
    port: int = 8000

    # Configuración de CORS
    cors_origins: str = "http://localhost:3000,http://127.0.0.1:3000"

    @property
    def cors_origins_list(self) -> list[str]:
        """Convierte la cadena de orígenes CORS en una lista"""
        return [origin.strip() for origin in self.cors_origins.split(",") if origin.strip()]


# Instancia global de configuración
settings = Settings()
