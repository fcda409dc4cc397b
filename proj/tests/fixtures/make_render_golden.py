"""Regenerates render_golden.tsv: 200 values rendered by the runner harness.

Columns: type, value (int decimal | float.hex() | bool | JSON string), rendering.
"""
import json
import os
import random
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.join(HERE, "..", "..", "runner"))
import harness  # noqa: E402


def values():
    rng = random.Random(20261019)
    out = []
    ints = [0, 1, -1, 5, 10, -20, 20, 2**63 - 1, -(2**63)]
    ints += [rng.randint(-10**12, 10**12) for _ in range(41)]
    out += [("int", v) for v in ints]
    floats = [0.0, -0.0, 0.5, 1.0, -2.5, 0.1, 1e16, 1e15, 9999999999999998.0, 1e-4, 1e-5,
              1.5e-7, 123456789012345678.0, 1e300, 5e-324, 2.2250738585072014e-308,
              float("inf"), float("-inf"), float("nan"), 1 / 3, 2 / 14, 100.0]
    while len(floats) < 90:
        floats.append(rng.uniform(-1, 1) * 10 ** rng.randint(-30, 30))
    out += [("float", v) for v in floats]
    out += [("bool", True), ("bool", False)]
    strings = ["", "a", 'a"b', "back\\slash", "new\nline", "tab\there", "a,\"b", "café",
               "☃ snow", "''", "{}", "x" * 40]
    alphabet = 'abc "\\\n\t,xyzé'
    while len(strings) < 58:
        strings.append("".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12))))
    out += [("str", v) for v in strings]
    assert len(out) == 200, len(out)
    return out


def encode(kind, v):
    if kind == "int":
        return str(v)
    if kind == "float":
        return v.hex()
    if kind == "bool":
        return "true" if v else "false"
    return json.dumps(v, ensure_ascii=False)


def main():
    with open(os.path.join(HERE, "render_golden.tsv"), "w", encoding="utf-8", newline="\n") as f:
        for kind, v in values():
            f.write("%s\t%s\t%s\n" % (kind, encode(kind, v), harness.render(v, kind)))


if __name__ == "__main__":
    main()
