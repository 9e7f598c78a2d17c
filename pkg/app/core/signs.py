# app/core/signs.py - Utilidades de signos graduados (regla de Koszul)

from typing import Sequence


def sign(exponent: int) -> int:
    """Devuelve (-1)^exponent"""
    return -1 if exponent % 2 else 1


def koszul_sign(left_degree: int, right_degree: int) -> int:
    """Signo (-1)^{|a||b|} al transponer dos elementos homogéneos"""
    return sign(left_degree * right_degree)


def derivation_law_sign(derivation_degree: int, factor_degree: int) -> int:
    """Signo (-1)^{n|x|} al pasar una derivación de grado n sobre un factor x"""
    return sign(derivation_degree * factor_degree)


def delta_sign(derivation_degree: int) -> int:
    """Signo (-1)^{|θ|} que acompaña a θ∘d en el diferencial de derivaciones"""
    return sign(derivation_degree)


def merge_sign(left: Sequence[int], right: Sequence[int], odd: Sequence[bool]) -> int:
    """
    Signo del producto de dos monomios en forma normal.

    Los monomios son vectores de exponentes en el orden de declaración de
    los generadores. Al fusionar, cada generador impar de ``right`` debe
    pasar sobre los generadores impares de ``left`` con índice mayor.
    Devuelve 0 si un generador impar aparece en ambos factores.
    """
    transpositions = 0
    odd_after = 0
    # Recorrido de derecha a izquierda contando impares de `left` ya vistos
    for index in range(len(odd) - 1, -1, -1):
        if not odd[index]:
            continue
        if left[index] and right[index]:
            return 0
        if right[index]:
            transpositions += odd_after
        if left[index]:
            odd_after += 1
    return sign(transpositions)
