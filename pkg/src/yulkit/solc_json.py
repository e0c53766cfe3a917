"""Conversion from the Solidity compiler's Yul AST JSON export to `ast` trees.

The compiler can be asked to dump the Yul AST of a compilation stage as JSON
(one object per node, discriminated by `nodeType`).  This module maps those
objects onto our tree so the result of a compiler transformation can be
checked against an independent implementation of the same transformation.

Only a fixed set of keys is consumed — `nodeType`, `statements`, `body`,
`condition`, `expression`, `value`, `variables`, `variableNames`,
`functionName`, `arguments`, `parameters`, `returnVariables`, `cases`,
`pre`, `post`, `kind`, `name`, plus the `type` annotation (accepted empty,
rejected otherwise) — everything else (`src`, `nativeSrc`, documentation
fields) is ignored, since the surrounding schema varies across compiler
versions.  Errors carry a `/`-separated path into the JSON tree.

There is no JSON emitter here: our own serialization is Yul text.
"""

from __future__ import annotations

import re
from typing import Any, List, Optional, Tuple

from ._stack import ensure_recursion_headroom
from .ast import (
    AssignMulti,
    AssignSingle,
    Block,
    BlockStmt,
    Break,
    Continue,
    DecNumber,
    Expression,
    FalseLit,
    For,
    FunCall,
    FunCallExpr,
    FunCallStmt,
    FunDef,
    FunDefStmt,
    HexEscape,
    HexNumber,
    Identifier,
    If,
    Leave,
    Literal,
    LiteralExpr,
    Path,
    PathExpr,
    PlainString,
    RawChar,
    SimpleEscape,
    Statement,
    SwCase,
    Switch,
    TrueLit,
    VariableMulti,
    VariableSingle,
)

_DEC_NUM_RE = re.compile(r"(?:0|[1-9][0-9]*)\Z")
_HEX_NUM_RE = re.compile(r"0x[0-9A-Fa-f]+\Z")

_ESCAPE_FOR = {"\\": "\\", '"': '"', "\n": "n", "\r": "r", "\t": "t"}


class ConvertError(Exception):
    """A JSON tree that does not describe a Yul program."""

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


def _joined(path: List[str]) -> str:
    return "/" + "/".join(path)


def _fail(path: List[str], reason: str) -> "ConvertError":
    return ConvertError(_joined(path), reason)


def _obj(node: Any, path: List[str]) -> dict:
    if not isinstance(node, dict):
        raise _fail(path, f"expected an object, got {type(node).__name__}")
    return node


def _get(obj: dict, key: str, path: List[str]) -> Any:
    if key not in obj:
        raise _fail(path, f"missing {key}")
    return obj[key]

def _get_list(obj: dict, key: str, path: List[str]) -> list:
    value = _get(obj, key, path)
    if not isinstance(value, list):
        raise _fail(path + [key], "expected an array")
    return value


def _get_str(obj: dict, key: str, path: List[str]) -> str:
    value = _get(obj, key, path)
    if not isinstance(value, str):
        raise _fail(path + [key], "expected a string")
    return value


def _node_type(node: Any, path: List[str]) -> str:
    return _get_str(_obj(node, path), "nodeType", path)


def _check_type_annotation(obj: dict, path: List[str]) -> None:
    # Typed Yul is legacy; an empty type annotation is tolerated, a real one
    # is not something this grammar can represent.
    t = obj.get("type", "")
    if t not in ("", None):
        raise _fail(path + ["type"], f"typed declarations are not supported: {t!r}")


def _identifier(text: str, path: List[str]) -> Identifier:
    try:
        return Identifier(text)
    except ValueError as exc:
        raise _fail(path, str(exc)) from None


def _name_path(text: str, path: List[str]) -> Path:
    # Dotted names become multi-part paths, exactly as the text parser reads
    # them (the static checker rejects them later; conversion is structural).
    parts = text.split(".")
    if not all(parts):
        raise _fail(path, f"malformed identifier {text!r}")
    return Path(tuple(_identifier(p, path) for p in parts))


def _typed_name(node: Any, path: List[str]) -> Identifier:
    obj = _obj(node, path)
    nt = _node_type(node, path)
    if nt != "YulTypedName":
        raise _fail(path, f"expected YulTypedName, got {nt}")
    _check_type_annotation(obj, path)
    return _identifier(_get_str(obj, "name", path), path + ["name"])


def _literal(obj: dict, path: List[str]) -> Literal:
    _check_type_annotation(obj, path)
    kind = _get_str(obj, "kind", path)
    value = _get_str(obj, "value", path)
    if kind == "number":
        if _HEX_NUM_RE.match(value):
            return HexNumber(value[2:])
        if _DEC_NUM_RE.match(value):
            return DecNumber(value)
        raise _fail(path + ["value"], f"malformed numeral {value!r}")
    if kind == "bool":
        if value == "true":
            return TrueLit()
        if value == "false":
            return FalseLit()
        raise _fail(path + ["value"], f"malformed boolean {value!r}")
    if kind == "string":
        # The JSON carries the decoded string; re-encode it with the
        # canonical escapes so the result prints as a parseable literal.
        elements = []
        for ch in value:
            if ch in _ESCAPE_FOR:
                elements.append(SimpleEscape(_ESCAPE_FOR[ch]))
            elif 0x20 <= ord(ch) <= 0x7E:
                elements.append(RawChar(ch))
            else:
                for byte in ch.encode("utf-8"):
                    elements.append(HexEscape(f"{byte:02x}"))
        return PlainString(tuple(elements))
    raise _fail(path + ["kind"], f"unknown literal kind {kind!r}")


def _expression(node: Any, path: List[str]) -> Expression:
    obj = _obj(node, path)
    nt = _node_type(node, path)
    if nt == "YulIdentifier":
        return PathExpr(_name_path(_get_str(obj, "name", path), path + ["name"]))
    if nt == "YulLiteral":
        return LiteralExpr(_literal(obj, path))
    if nt == "YulFunctionCall":
        return FunCallExpr(_funcall(obj, path))
    raise _fail(path, f"unknown expression nodeType {nt!r}")


def _funcall(obj: dict, path: List[str]) -> FunCall:
    fn = _obj(_get(obj, "functionName", path), path + ["functionName"])
    if _node_type(fn, path + ["functionName"]) != "YulIdentifier":
        raise _fail(path + ["functionName"], "expected YulIdentifier")
    name_text = _get_str(fn, "name", path + ["functionName"])
    if "." in name_text:
        raise _fail(path + ["functionName", "name"], f"dotted function name {name_text!r}")
    name = _identifier(name_text, path + ["functionName", "name"])
    args = _get_list(obj, "arguments", path)
    return FunCall(
        name,
        tuple(
            _expression(a, path + ["arguments", str(i)]) for i, a in enumerate(args)
        ),
    )


def _target_path(node: Any, path: List[str]) -> Path:
    obj = _obj(node, path)
    if _node_type(node, path) != "YulIdentifier":
        raise _fail(path, "assignment target must be a YulIdentifier")
    return _name_path(_get_str(obj, "name", path), path + ["name"])


def _statement(node: Any, path: List[str]) -> Statement:
    obj = _obj(node, path)
    nt = _node_type(node, path)

    if nt == "YulBlock":
        return _block_stmt(obj, path)
    if nt == "YulVariableDeclaration":
        names = [
            _typed_name(v, path + ["variables", str(i)])
            for i, v in enumerate(_get_list(obj, "variables", path))
        ]
        if not names:
            raise _fail(path + ["variables"], "no variables declared")
        init = obj.get("value")
        if len(names) == 1:
            expr = None if init is None else _expression(init, path + ["value"])
            return VariableSingle(names[0], expr)
        if init is None:
            return VariableMulti(tuple(names), None)
        init_obj = _obj(init, path + ["value"])
        if _node_type(init, path + ["value"]) != "YulFunctionCall":
            raise _fail(
                path + ["value"], "multi-variable initializer must be a function call"
            )
        return VariableMulti(tuple(names), _funcall(init_obj, path + ["value"]))
    if nt == "YulAssignment":
        targets = [
            _target_path(v, path + ["variableNames", str(i)])
            for i, v in enumerate(_get_list(obj, "variableNames", path))
        ]
        if not targets:
            raise _fail(path + ["variableNames"], "no assignment targets")
        value = _get(obj, "value", path)
        if len(targets) == 1:
            return AssignSingle(targets[0], _expression(value, path + ["value"]))
        value_obj = _obj(value, path + ["value"])
        if _node_type(value, path + ["value"]) != "YulFunctionCall":
            raise _fail(path + ["value"], "multi-assignment value must be a function call")
        return AssignMulti(tuple(targets), _funcall(value_obj, path + ["value"]))
    if nt == "YulExpressionStatement":
        inner = _get(obj, "expression", path)
        inner_obj = _obj(inner, path + ["expression"])
        if _node_type(inner, path + ["expression"]) != "YulFunctionCall":
            raise _fail(
                path + ["expression"], "only function calls can stand as statements"
            )
        return FunCallStmt(_funcall(inner_obj, path + ["expression"]))
    if nt == "YulIf":
        test = _expression(_get(obj, "condition", path), path + ["condition"])
        body = _block(_get(obj, "body", path), path + ["body"])
        return If(test, body)
    if nt == "YulSwitch":
        target = _expression(_get(obj, "expression", path), path + ["expression"])
        cases: List[SwCase] = []
        default: Optional[Block] = None
        for i, case_node in enumerate(_get_list(obj, "cases", path)):
            cpath = path + ["cases", str(i)]
            cobj = _obj(case_node, cpath)
            if _node_type(case_node, cpath) != "YulCase":
                raise _fail(cpath, "expected YulCase")
            body = _block(_get(cobj, "body", cpath), cpath + ["body"])
            value = _get(cobj, "value", cpath)
            if value == "default":
                if default is not None:
                    raise _fail(cpath, "second default case")
                default = body
            else:
                vobj = _obj(value, cpath + ["value"])
                if _node_type(value, cpath + ["value"]) != "YulLiteral":
                    raise _fail(cpath + ["value"], "case value must be a literal")
                cases.append(SwCase(_literal(vobj, cpath + ["value"]), body))
        if not cases and default is None:
            raise _fail(path + ["cases"], "switch needs a case or a default")
        return Switch(target, tuple(cases), default)
    if nt == "YulForLoop":
        return For(
            _block(_get(obj, "pre", path), path + ["pre"]),
            _expression(_get(obj, "condition", path), path + ["condition"]),
            _block(_get(obj, "post", path), path + ["post"]),
            _block(_get(obj, "body", path), path + ["body"]),
        )
    if nt == "YulFunctionDefinition":
        name_text = _get_str(obj, "name", path)
        if "." in name_text:
            raise _fail(path + ["name"], f"dotted function name {name_text!r}")
        name = _identifier(name_text, path + ["name"])
        inputs = tuple(
            _typed_name(p, path + ["parameters", str(i)])
            for i, p in enumerate(obj.get("parameters", []))
        )
        outputs = tuple(
            _typed_name(p, path + ["returnVariables", str(i)])
            for i, p in enumerate(obj.get("returnVariables", []))
        )
        body = _block(_get(obj, "body", path), path + ["body"])
        try:
            fundef = FunDef(name, inputs, outputs, body)
        except ValueError as exc:
            raise _fail(path, str(exc)) from None
        return FunDefStmt(fundef)
    if nt == "YulBreak":
        return Break()
    if nt == "YulContinue":
        return Continue()
    if nt == "YulLeave":
        return Leave()
    raise _fail(path, f"unknown statement nodeType {nt!r}")


def _block_stmt(obj: dict, path: List[str]) -> BlockStmt:
    return BlockStmt(_block_of(obj, path))


def _block(node: Any, path: List[str]) -> Block:
    obj = _obj(node, path)
    nt = _node_type(node, path)
    if nt != "YulBlock":
        raise _fail(path, f"expected YulBlock, got {nt}")
    return _block_of(obj, path)


def _block_of(obj: dict, path: List[str]) -> Block:
    statements = _get_list(obj, "statements", path)
    return Block(
        tuple(
            _statement(s, path + ["statements", str(i)])
            for i, s in enumerate(statements)
        )
    )


def convert(json_node: Any) -> Block:
    """Convert a parsed solc Yul AST JSON tree (root must be a YulBlock) to a
    Block.  Raises ConvertError with a path into the JSON on malformed input."""
    ensure_recursion_headroom()
    return _block(json_node, [])


def convert_pair(old_json: Any, new_json: Any) -> Tuple[Block, Block]:
    """Convert the before/after pair of a compiler transformation.  Errors
    name the side they occurred in."""
    try:
        old = convert(old_json)
    except ConvertError as exc:
        raise ConvertError("old" + exc.path, exc.reason) from None
    try:
        new = convert(new_json)
    except ConvertError as exc:
        raise ConvertError("new" + exc.path, exc.reason) from None
    return old, new
