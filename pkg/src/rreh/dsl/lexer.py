from __future__ import annotations

import re
from dataclasses import dataclass

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
PUNCT = set("{};:,=@()")
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int = 0

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError(f"invalid span position {self.line}:{self.column}")

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, STRING, PUNCT, EOF
    value: str
    span: SourceSpan

    def describe(self) -> str:
        if self.kind == "EOF":
            return "end of input"
        if self.kind == "STRING":
            return f"string {self.value!r}"
        return f"'{self.value}'"


class LexError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(message)
        self.message = message
        self.span = span


def tokenize(source: str, file: str = "<string>") -> tuple[list[Token], list[LexError]]:
    """Split ``source`` into tokens. Comments run from ``#`` to end of line.

    Lexical errors do not stop scanning: the offending character (or the
    rest of the line, for a broken string) is skipped and reported.
    """
    tokens: list[Token] = []
    errors: list[LexError] = []
    i, line, col = 0, 1, 1
    if source.startswith("\ufeff"):
        errors.append(LexError("byte order mark is not allowed; save the file as UTF-8 without BOM", SourceSpan(file, 1, 1, 1)))
        i = 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch in PUNCT:
            tokens.append(Token("PUNCT", ch, SourceSpan(file, line, col, 1)))
            i, col = i + 1, col + 1
            continue
        if ch == '"':
            start_col = col
            j = i + 1
            buf = []
            broken = False
            while True:
                if j >= n or source[j] == "\n":
                    errors.append(LexError("unterminated string literal", SourceSpan(file, line, start_col, j - i)))
                    broken = True
                    break
                c = source[j]
                if c == '"':
                    break
                if c == "\\":
                    if j + 1 >= n or source[j + 1] not in _ESCAPES:
                        errors.append(LexError("invalid escape sequence in string", SourceSpan(file, line, col + (j - i), 2)))
                        j += 1
                        continue
                    buf.append(_ESCAPES[source[j + 1]])
                    j += 2
                    continue
                buf.append(c)
                j += 1
            if broken:
                col += j - i
                i = j
                continue
            length = j + 1 - i
            tokens.append(Token("STRING", "".join(buf), SourceSpan(file, line, start_col, length)))
            i, col = j + 1, col + length
            continue
        m = IDENT_RE.match(source, i)
        if m:
            text = m.group()
            tokens.append(Token("IDENT", text, SourceSpan(file, line, col, len(text))))
            i, col = m.end(), col + len(text)
            continue
        errors.append(LexError(f"unexpected character {ch!r}", SourceSpan(file, line, col, 1)))
        i, col = i + 1, col + 1
    tokens.append(Token("EOF", "", SourceSpan(file, line, col, 0)))
    return tokens, errors
