# app/dsl/parser.py - Parser descendente recursivo y validación semántica de workspaces

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from sympy import QQ

from app.core.exceptions import ParseError, SemanticError
from app.core.linalg import Rational
from app.dsl.lexer import KEYWORDS, Lexer, Token
from app.models.algebra import DGMorphism, Element, FreeDGAlgebra
from app.models.workspace import TASK_KINDS, TaskSpec, Workspace
from app.repositories.model_library import model_library
from app.services.algebra_service import AlgebraService

logger = logging.getLogger(__name__)

KEY_PATTERN = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")

Diagnostic = Tuple[int, int, str]


# AST de polinomios


@dataclass(frozen=True)
class FactorNode:
    name: str
    exponent: int
    line: int
    column: int


@dataclass(frozen=True)
class TermNode:
    coefficient: Rational
    factors: Tuple[FactorNode, ...]
    text: str
    line: int
    column: int

    def exponents(self) -> Dict[str, int]:
        """Exponente total de cada generador (x*x cuenta como x^2)"""
        result: Dict[str, int] = {}
        for factor in self.factors:
            result[factor.name] = result.get(factor.name, 0) + factor.exponent
        return result


@dataclass(frozen=True)
class PolynomialNode:
    """Polinomio tal como se escribió; se evalúa en un álgebra concreta"""

    terms: Tuple[TermNode, ...]
    line: int = 1
    column: int = 1

    def evaluate(self, algebra: FreeDGAlgebra) -> Element:
        total = algebra.zero()
        for term in self.terms:
            value = algebra.scalar(term.coefficient)
            for factor in term.factors:
                if not algebra.has_generator(factor.name):
                    raise SemanticError(
                        f"{factor.line}:{factor.column}: generador desconocido '{factor.name}' en {algebra.name}"
                    )
                value = value * algebra.gen(factor.name) ** factor.exponent
            total = total + value
        return total

    def check(self, degrees: Mapping[str, int], expected: Optional[int], context: str) -> List[Diagnostic]:
        """Generadores desconocidos, cuadrados impares y grados de cada término"""
        problems: List[Diagnostic] = []
        for term in self.terms:
            exponents = term.exponents()
            unknown = [name for name in exponents if name not in degrees]
            for name in unknown:
                problems.append((term.line, term.column, f"generador desconocido '{name}' en {context}"))
            if unknown:
                continue
            for name, exponent in exponents.items():
                if degrees[name] % 2 and exponent >= 2:
                    problems.append(
                        (term.line, term.column, f"odd square is zero: '{term.text}' contiene {name}^{exponent} con {name} de grado impar")
                    )
            degree = sum(degrees[name] * exponent for name, exponent in exponents.items())
            if expected is not None and term.coefficient and degree != expected:
                problems.append(
                    (term.line, term.column, f"degree mismatch: '{term.text}' tiene grado {degree}, se esperaba {expected} en {context}")
                )
        return problems


# AST de declaraciones


@dataclass
class ModelDecl:
    name: str
    line: int
    column: int
    generators: List[Tuple[str, int, int, int]] = field(default_factory=list)
    differentials: List[Tuple[str, PolynomialNode, int, int]] = field(default_factory=list)


@dataclass
class MapDecl:
    name: str
    source: str
    target: str
    line: int
    column: int
    images: List[Tuple[str, PolynomialNode, int, int]] = field(default_factory=list)


@dataclass
class TaskDecl:
    name: str
    line: int
    column: int
    params: List[Tuple[str, str, int, int]] = field(default_factory=list)


@dataclass
class WorkspaceAST:
    models: List[ModelDecl] = field(default_factory=list)
    maps: List[MapDecl] = field(default_factory=list)
    tasks: List[TaskDecl] = field(default_factory=list)


class _SyntaxError(Exception):
    def __init__(self, token: Token, message: str):
        super().__init__(message)
        self.token = token
        self.message = message


class Parser:
    """
    Descenso recursivo con un token de anticipación.

    Tras un error se registra el diagnóstico y se resincroniza en el
    siguiente ';' o '}' dentro de un bloque, o en la siguiente palabra
    clave en el nivel superior, para informar de todos los errores.
    """

    def __init__(self, text: str):
        self.text = text
        self.lexer = Lexer(text)
        self.diagnostics: List[Diagnostic] = []
        self.previous: Optional[Token] = None
        self.current: Token = self.lexer.next_token()

    # Tokens

    def advance(self) -> Token:
        token = self.current
        self.previous = token
        self.current = self.lexer.next_token()
        return token

    def expect_symbol(self, text: str) -> Token:
        if not self.current.is_symbol(text):
            raise _SyntaxError(self.current, f"se esperaba '{text}', se encontró {self.current.describe()}")
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.current.kind != kind:
            raise _SyntaxError(self.current, f"se esperaba {what}, se encontró {self.current.describe()}")
        return self.advance()

    def error(self, token: Token, message: str) -> None:
        self.diagnostics.append((token.line, token.column, message))

    def all_diagnostics(self) -> List[Diagnostic]:
        return sorted(self.lexer.diagnostics + self.diagnostics)

    # Nivel superior

    def parse_workspace(self) -> WorkspaceAST:
        """workspace := item*"""
        ast = WorkspaceAST()
        while self.current.kind != "EOF":
            try:
                if self.current.is_word("model"):
                    ast.models.append(self.parse_model())
                elif self.current.is_word("map"):
                    ast.maps.append(self.parse_map())
                elif self.current.is_word("task"):
                    ast.tasks.append(self.parse_task())
                else:
                    raise _SyntaxError(
                        self.current, f"se esperaba 'model', 'map' o 'task', se encontró {self.current.describe()}"
                    )
            except _SyntaxError as exc:
                self.error(exc.token, exc.message)
                self._synchronize_top()
        return ast

    def _synchronize_top(self) -> None:
        while self.current.kind != "EOF" and not (
            self.current.kind == "IDENT" and self.current.text in KEYWORDS
        ):
            self.advance()

    def _synchronize_statement(self) -> bool:
        """Saltar hasta ';' (consumido) o '}' (no consumido); False si se sale del bloque"""
        while self.current.kind != "EOF":
            if self.current.is_symbol(";"):
                self.advance()
                return True
            if self.current.is_symbol("}"):
                return True
            if self.current.kind == "IDENT" and self.current.text in KEYWORDS:
                return False
            self.advance()
        return False

    def _block(self, statement) -> bool:
        """Enunciados hasta '}'; devuelve False si el bloque quedó sin cerrar"""
        while not self.current.is_symbol("}"):
            if self.current.kind == "EOF":
                self.error(self.current, "falta '}' al final del bloque")
                return False
            try:
                statement()
            except _SyntaxError as exc:
                self.error(exc.token, exc.message)
                if not self._synchronize_statement():
                    return False
        self.advance()
        return True

    # model

    def parse_model(self) -> ModelDecl:
        """model := "model" IDENT "{" gendecl* diffdecl* "}" """
        keyword = self.advance()
        name = self.expect_kind("IDENT", "el nombre del modelo")
        decl = ModelDecl(name.text, keyword.line, keyword.column)
        self.expect_symbol("{")

        def statement() -> None:
            if self.current.is_word("gen"):
                self.advance()
                gen = self.expect_kind("IDENT", "el nombre del generador")
                self.expect_symbol(":")
                degree = self.expect_kind("INT", "el grado del generador")
                self.expect_symbol(";")
                decl.generators.append((gen.text, int(degree.text), gen.line, gen.column))
            elif self.current.is_word("d"):
                start = self.advance()
                gen = self.expect_kind("IDENT", "el generador del diferencial")
                self.expect_symbol("=")
                value = self.parse_polynomial()
                self.expect_symbol(";")
                decl.differentials.append((gen.text, value, start.line, start.column))
            else:
                raise _SyntaxError(self.current, f"se esperaba 'gen' o 'd', se encontró {self.current.describe()}")

        self._block(statement)
        return decl

    # map

    def parse_map(self) -> MapDecl:
        """morphism := "map" IDENT ":" IDENT "->" IDENT "{" (IDENT "|->" poly ";")* "}" """
        keyword = self.advance()
        name = self.expect_kind("IDENT", "el nombre del morfismo")
        self.expect_symbol(":")
        source = self.expect_kind("IDENT", "el modelo origen")
        self.expect_kind("ARROW", "'->'")
        target = self.expect_kind("IDENT", "el modelo destino")
        decl = MapDecl(name.text, source.text, target.text, keyword.line, keyword.column)
        self.expect_symbol("{")

        def statement() -> None:
            gen = self.expect_kind("IDENT", "un generador del origen")
            self.expect_kind("MAPSTO", "'|->'")
            value = self.parse_polynomial()
            self.expect_symbol(";")
            decl.images.append((gen.text, value, gen.line, gen.column))

        self._block(statement)
        return decl

    # task

    def parse_task(self) -> TaskDecl:
        """task := "task" IDENT "{" (KEY "=" VALUE ";")* "}"; los valores se toman literalmente"""
        keyword = self.advance()
        name = self.expect_kind("IDENT", "el nombre de la tarea")
        decl = TaskDecl(name.text, keyword.line, keyword.column)
        if not self.current.is_symbol("{"):
            raise _SyntaxError(self.current, f"se esperaba '{{', se encontró {self.current.describe()}")
        lexer = self.lexer
        while True:
            lexer.skip_blank()
            char = lexer.peek_char()
            if char == "}":
                lexer.read_raw("}")
                break
            if not char:
                self.diagnostics.append((lexer.line, lexer.column, "falta '}' al final de la tarea"))
                break
            key, line, column, terminator = lexer.read_raw("=;}")
            if terminator != "=":
                self.diagnostics.append((line, column, f"se esperaba 'clave = valor;' en la tarea {decl.name}"))
                if terminator == "}":
                    break
                continue
            if not KEY_PATTERN.match(key):
                self.diagnostics.append((line, column, f"clave de tarea inválida '{key}'"))
            value, value_line, value_column, terminator = lexer.read_raw(";}")
            if terminator != ";":
                self.diagnostics.append((value_line, value_column, f"falta ';' tras el valor de '{key}'"))
            if not value:
                self.diagnostics.append((value_line, value_column, f"valor vacío para '{key}'"))
            decl.params.append((key, value, line, column))
            if terminator != ";":
                break
        self.previous = None
        self.current = lexer.next_token()
        return decl

    # Polinomios

    def parse_polynomial(self) -> PolynomialNode:
        """poly := ["-"] term (("+"|"-") term)* | "0" """
        start = self.current
        sign = 1
        if self.current.is_symbol("-"):
            self.advance()
            sign = -1
        elif self.current.is_symbol("+"):
            self.advance()
        terms = [self.parse_term(sign)]
        while self.current.is_symbol("+") or self.current.is_symbol("-"):
            sign = -1 if self.advance().text == "-" else 1
            terms.append(self.parse_term(sign))
        return PolynomialNode(tuple(terms), start.line, start.column)

    def parse_term(self, sign: int) -> TermNode:
        """term := [coef ["*"]] factor ("*" factor)* | coef"""
        start = self.current
        coefficient = QQ(sign)
        factors: List[FactorNode] = []
        if self.current.kind == "INT":
            numerator = int(self.advance().text)
            denominator = 1
            if self.current.is_symbol("/"):
                self.advance()
                token = self.expect_kind("INT", "el denominador")
                denominator = int(token.text)
                if denominator == 0:
                    raise _SyntaxError(token, "denominador cero")
            coefficient = QQ(sign * numerator, denominator)
            if self.current.is_symbol("*"):
                self.advance()
                factors.append(self.parse_factor())
            elif self.current.kind == "IDENT":
                factors.append(self.parse_factor())
        else:
            factors.append(self.parse_factor())
        while self.current.is_symbol("*"):
            self.advance()
            factors.append(self.parse_factor())
        end = self.previous.offset + len(self.previous.text) if self.previous else start.offset
        return TermNode(coefficient, tuple(factors), self.text[start.offset : end], start.line, start.column)

    def parse_factor(self) -> FactorNode:
        """factor := IDENT ["^" INT]"""
        name = self.expect_kind("IDENT", "un generador")
        exponent = 1
        if self.current.is_symbol("^"):
            self.advance()
            exponent = int(self.expect_kind("INT", "un exponente").text)
        return FactorNode(name.text, exponent, name.line, name.column)


def parse_polynomial(text: str) -> PolynomialNode:
    """Analizar una expresión polinomial suelta"""
    parser = Parser(text)
    try:
        node = parser.parse_polynomial()
        if parser.current.kind != "EOF":
            raise _SyntaxError(parser.current, f"texto sobrante {parser.current.describe()}")
    except _SyntaxError as exc:
        parser.error(exc.token, exc.message)
    if parser.all_diagnostics():
        raise ParseError(parser.all_diagnostics())
    return node


# Validación semántica


class _WorkspaceBuilder:
    """Construye el Workspace acumulando todos los errores semánticos"""

    def __init__(self, ast: WorkspaceAST):
        self.ast = ast
        self.errors: List[Diagnostic] = []
        self.algebras = AlgebraService()
        self.workspace = Workspace()

    def build(self) -> Workspace:
        for decl in self.ast.models:
            self._model(decl)
        for decl in self.ast.maps:
            self._map(decl)
        for decl in self.ast.tasks:
            self._task(decl)
        if self.errors:
            details = [f"{line}:{column}: {message}" for line, column, message in sorted(self.errors)]
            raise SemanticError(f"El workspace tiene {len(details)} errores semánticos", details)
        return self.workspace

    def _model(self, decl: ModelDecl) -> None:
        if decl.name in self.workspace.models:
            self.errors.append((decl.line, decl.column, f"modelo duplicado '{decl.name}'"))
            return
        generators: List[Tuple[str, int]] = []
        for name, degree, line, column in decl.generators:
            if any(name == existing for existing, _ in generators):
                self.errors.append((line, column, f"generador duplicado '{name}' en {decl.name}"))
            elif degree < 1:
                self.errors.append((line, column, f"el generador {name} debe tener grado ≥ 1"))
            else:
                generators.append((name, degree))
        algebra = FreeDGAlgebra(decl.name, generators)
        degrees = dict(generators)
        seen = set()
        clean = True
        for name, value, line, column in decl.differentials:
            if name not in degrees:
                self.errors.append((line, column, f"diferencial de un generador no declarado '{name}'"))
                clean = False
                continue
            if name in seen:
                self.errors.append((line, column, f"diferencial duplicado para '{name}'"))
                clean = False
                continue
            seen.add(name)
            problems = value.check(degrees, degrees[name] + 1, f"d {name}")
            if problems:
                self.errors.extend(problems)
                clean = False
                continue
            algebra.set_differential(name, value.evaluate(algebra))
        algebra.freeze()
        if clean:
            report = self.algebras.validate_dga(algebra)
            for issue in report.issues:
                line, column = self._position(decl, issue.subject)
                self.errors.append((line, column, f"{decl.name}: {issue}"))
        self.workspace.models[decl.name] = algebra

    @staticmethod
    def _position(decl: ModelDecl, subject: str) -> Tuple[int, int]:
        for name, _, line, column in decl.differentials:
            if subject == f"d {name}":
                return line, column
        return decl.line, decl.column

    def _resolve(self, name: str, line: int, column: int) -> Optional[FreeDGAlgebra]:
        if name in self.workspace.models:
            return self.workspace.models[name]
        if model_library.is_builtin(name):
            try:
                return model_library.resolve(name)
            except SemanticError as error:
                self.errors.append((line, column, error.message))
                return None
        self.errors.append((line, column, f"modelo desconocido '{name}'"))
        return None

    def _map(self, decl: MapDecl) -> None:
        if decl.name in self.workspace.morphisms:
            self.errors.append((decl.line, decl.column, f"morfismo duplicado '{decl.name}'"))
            return
        source = self._resolve(decl.source, decl.line, decl.column)
        target = self._resolve(decl.target, decl.line, decl.column)
        if source is None or target is None:
            return
        target_degrees = {gen.name: gen.degree for gen in target.generators}
        images: Dict[str, Element] = {}
        clean = True
        for name, value, line, column in decl.images:
            if not source.has_generator(name):
                self.errors.append((line, column, f"'{name}' no es un generador de {source.name}"))
                clean = False
                continue
            if name in images:
                self.errors.append((line, column, f"imagen duplicada para '{name}'"))
                clean = False
                continue
            problems = value.check(target_degrees, source.generator(name).degree, f"{decl.name}({name})")
            if problems:
                self.errors.extend(problems)
                clean = False
                continue
            images[name] = value.evaluate(target)
        morphism = DGMorphism(decl.name, source, target, images)
        if clean:
            for issue in self.algebras.validate_morphism(morphism).issues:
                self.errors.append((decl.line, decl.column, f"{decl.name}: {issue}"))
        self.workspace.morphisms[decl.name] = morphism

    def _task(self, decl: TaskDecl) -> None:
        params: Dict[str, str] = {}
        for key, value, line, column in decl.params:
            if key in params:
                self.errors.append((line, column, f"parámetro duplicado '{key}' en la tarea {decl.name}"))
            params[key] = value
        if any(task.name == decl.name for task in self.workspace.tasks):
            self.errors.append((decl.line, decl.column, f"tarea duplicada '{decl.name}'"))
            return
        kind = params.pop("kind", decl.name.replace("_", "-"))
        if kind not in TASK_KINDS:
            self.errors.append((decl.line, decl.column, f"tipo de tarea desconocido '{kind}'"))
        if "map" in params and params["map"] not in self.workspace.morphisms:
            self.errors.append((decl.line, decl.column, f"la tarea {decl.name} usa un morfismo no declarado '{params['map']}'"))
        if "model" in params and not self.workspace.has_model(params["model"]):
            self.errors.append((decl.line, decl.column, f"la tarea {decl.name} usa un modelo desconocido '{params['model']}'"))
        self.workspace.tasks.append(TaskSpec(decl.name, kind, params, decl.line, decl.column))


def parse_workspace_ast(text: str) -> WorkspaceAST:
    parser = Parser(text)
    ast = parser.parse_workspace()
    if parser.all_diagnostics():
        raise ParseError(parser.all_diagnostics())
    return ast


def parse_workspace(text: str) -> Workspace:
    """Análisis completo: errores de sintaxis (ParseError) y luego semánticos (SemanticError)"""
    ast = parse_workspace_ast(text)
    workspace = _WorkspaceBuilder(ast).build()
    logger.debug(
        "Workspace: %d modelos, %d morfismos, %d tareas",
        len(workspace.models),
        len(workspace.morphisms),
        len(workspace.tasks),
    )
    return workspace


def format_workspace(workspace: Workspace) -> str:
    """Texto del workspace que vuelve a analizarse al mismo contenido"""
    blocks: List[str] = []
    for algebra in workspace.models.values():
        lines = [f"model {algebra.name} {{"]
        lines.extend(f"  gen {gen.name} : {gen.degree};" for gen in algebra.generators)
        for gen in algebra.generators:
            value = algebra.generator_differential(gen.index)
            if not value.is_zero():
                lines.append(f"  d {gen.name} = {algebra.render(value)};")
        lines.append("}")
        blocks.append("\n".join(lines))
    for morphism in workspace.morphisms.values():
        lines = [f"map {morphism.name} : {morphism.source.name} -> {morphism.target.name} {{"]
        for gen, value in zip(morphism.source.generators, morphism.images):
            if not value.is_zero():
                lines.append(f"  {gen.name} |-> {morphism.target.render(value)};")
        lines.append("}")
        blocks.append("\n".join(lines))
    for task in workspace.tasks:
        lines = [f"task {task.name} {{", f"  kind = {task.kind};"]
        lines.extend(f"  {key} = {value};" for key, value in task.params.items())
        lines.append("}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n" if blocks else ""
