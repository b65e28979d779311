from rreh.dsl.export import SKELETON_HEADER, ExportCounts, export_dot, export_model_skeleton
from rreh.dsl.lexer import SourceSpan
from rreh.dsl.parser import HubDocument, ParseDiagnostic, ParseError, levenshtein, parse, parse_file
from rreh.dsl.serialize import serialize

__all__ = [
    "SKELETON_HEADER",
    "ExportCounts",
    "HubDocument",
    "ParseDiagnostic",
    "ParseError",
    "SourceSpan",
    "export_dot",
    "export_model_skeleton",
    "levenshtein",
    "parse",
    "parse_file",
    "serialize",
]
