# cli.py - Punto de entrada de la línea de comandos

from app.cli import run

if __name__ == "__main__":
    run()
