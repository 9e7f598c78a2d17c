# gunicorn_config.py - Configuración para Gunicorn con FastAPI/Uvicorn
from app.core.config import settings

bind = f"{settings.host}:{settings.port}"
workers = 2
worker_class = "uvicorn.workers.UvicornWorker"
max_requests = 200
max_requests_jitter = 20
# Las ventanas de grado grandes tardan más que una petición CRUD
timeout = 120
keepalive = 2
preload_app = True
