# app/dsl/lexer.py - Analizador léxico del lenguaje de workspaces

import re
from dataclasses import dataclass
from typing import List, Optional, Pattern, Tuple

# Tabla ordenada: la primera expresión que encaja gana
TOKEN_TABLE: List[Tuple[Pattern, Optional[str]]] = [
    (re.compile(r"[ \t\r\n]+"), None),
    (re.compile(r"(#|//)[^\n]*"), None),
    (re.compile(r"\|->"), "MAPSTO"),
    (re.compile(r"->"), "ARROW"),
    (re.compile(r"\d+"), "INT"),
    (re.compile(r"[A-Za-z_][A-Za-z0-9_]*"), "IDENT"),
    (re.compile(r"[{}:;=+\-*/^]"), "SYMBOL"),
]

KEYWORDS = {"model", "map", "task"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int
    offset: int

    def is_symbol(self, text: str) -> bool:
        return self.kind == "SYMBOL" and self.text == text

    def is_word(self, text: str) -> bool:
        return self.kind == "IDENT" and self.text == text

    def describe(self) -> str:
        return "fin de fichero" if self.kind == "EOF" else f"'{self.text}'"


class Lexer:
    """
    Produce tokens bajo demanda con línea y columna (base 1).

    Los caracteres no reconocidos se registran como diagnósticos y se
    saltan. ``read_raw`` permite al parser tomar texto literal, como los
    valores de las tareas.
    """

    def __init__(self, text: str):
        self.text = text
        self.position = 0
        self.line = 1
        self.column = 1
        self.diagnostics: List[Tuple[int, int, str]] = []

    def _advance(self, length: int) -> None:
        chunk = self.text[self.position : self.position + length]
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.column = len(chunk) - chunk.rfind("\n")
        else:
            self.column += length
        self.position += length

    def next_token(self) -> Token:
        while self.position < len(self.text):
            for pattern, kind in TOKEN_TABLE:
                match = pattern.match(self.text, self.position)
                if not match:
                    continue
                if kind is None:
                    self._advance(len(match.group()))
                    break
                token = Token(kind, match.group(), self.line, self.column, self.position)
                self._advance(len(match.group()))
                return token
            else:
                self.diagnostics.append((self.line, self.column, f"carácter inesperado '{self.text[self.position]}'"))
                self._advance(1)
        return Token("EOF", "", self.line, self.column, self.position)

    def read_raw(self, stops: str) -> Tuple[str, int, int, Optional[str]]:
        """
        Texto literal hasta el primer carácter de ``stops`` (sin incluirlo).

        Devuelve (texto sin espacios extremos, línea, columna, terminador);
        el terminador es None si se llegó al final del fichero.
        """
        while self.position < len(self.text) and self.text[self.position] in " \t\r\n":
            self._advance(1)
        line, column = self.line, self.column
        start = self.position
        while self.position < len(self.text) and self.text[self.position] not in stops:
            self._advance(1)
        raw = self.text[start : self.position].strip()
        if self.position >= len(self.text):
            return raw, line, column, None
        terminator = self.text[self.position]
        self._advance(1)
        return raw, line, column, terminator

    def skip_blank(self) -> None:
        """Saltar espacios y comentarios"""
        while self.position < len(self.text):
            for pattern, kind in TOKEN_TABLE[:2]:
                match = pattern.match(self.text, self.position)
                if match:
                    self._advance(len(match.group()))
                    break
            else:
                return

    def peek_char(self) -> str:
        return self.text[self.position] if self.position < len(self.text) else ""


def tokenize(text: str) -> Tuple[List[Token], List[Tuple[int, int, str]]]:
    """Todos los tokens de un texto (incluido EOF) y los diagnósticos léxicos"""
    lexer = Lexer(text)
    tokens = []
    while True:
        token = lexer.next_token()
        tokens.append(token)
        if token.kind == "EOF":
            return tokens, lexer.diagnostics
