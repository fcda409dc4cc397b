# Copyright 2026 The unitgrade Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""In-sandbox test harness.

Loads a filled source file, calls the configured function once per data.csv
row and writes one result line per row:

  student mode:  checked:<value> | exception:<type>: <message> | timeout | error:<tag>
  teacher mode:  <value>         | !exception:...              | !timeout | !error:...

A source that does not load produces the single line load-error:<diagnostic>.
Only the standard library is used.
"""

import argparse
import builtins
import csv
import json
import math
import signal
import sys
import time


class _Timeout(BaseException):
    pass


class _Sink:
    def write(self, data):
        return len(data)

    def flush(self):
        pass

    def isatty(self):
        return False


def render_float(v):
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def render_str(s):
    out = ['"']
    for c in s:
        if c == '"':
            out.append('\\"')
        elif c == "\\":
            out.append("\\\\")
        elif c == "\n":
            out.append("\\n")
        elif c == "\t":
            out.append("\\t")
        else:
            out.append(c)
    out.append('"')
    return "".join(out)


def render(value, kind):
    """Canonical text of a return value, or None if it has the wrong type."""
    if kind == "int":
        if isinstance(value, int) and not isinstance(value, bool):
            return str(value)
    elif kind == "float":
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return render_float(float(value))
    elif kind == "bool":
        if isinstance(value, bool):
            return "true" if value else "false"
    elif kind == "str":
        if isinstance(value, str):
            return render_str(value)
    return None


def parse_field(text, kind):
    if kind == "int":
        return int(text)
    if kind == "float":
        return float(text)
    if kind == "bool":
        if text == "true":
            return True
        if text == "false":
            return False
        raise ValueError("bad bool %r" % text)
    return text


def first_line(text):
    lines = str(text).splitlines()
    return lines[0] if lines else ""


def describe(exc):
    msg = first_line(exc)
    name = type(exc).__name__
    return "%s: %s" % (name, msg) if msg else name


def _on_alarm(signum, frame):
    raise _Timeout()


def load_function(path, name):
    with open(path, encoding="utf-8") as f:
        source = f.read()
    namespace = {"__name__": "__submission__", "__builtins__": builtins}
    code = compile(source, path, "exec")
    exec(code, namespace)
    fn = namespace.get(name)
    if not callable(fn):
        raise NameError("function %r is not defined" % name)
    return fn


def call_one(fn, args, per_test_time, return_kind):
    """Returns (verdict, value) for one test row."""
    saved = sys.stdout, sys.stderr
    sys.stdout = sys.stderr = _Sink()
    start = time.monotonic()
    signal.setitimer(signal.ITIMER_REAL, per_test_time)
    try:
        result = fn(*args)
    except _Timeout:
        return "timeout", ""
    except BaseException as exc:  # learner code may raise anything
        if time.monotonic() - start >= per_test_time:
            return "timeout", ""
        return "exception", describe(exc)
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        sys.stdout, sys.stderr = saved
    if time.monotonic() - start >= per_test_time:
        return "timeout", ""
    text = render(result, return_kind)
    if text is None:
        return "error", "wrong-type: expected %s, got %s" % (return_kind, type(result).__name__)
    return "checked", text


def format_line(mode, verdict, value):
    if mode == "teacher":
        if verdict == "checked":
            return value
        return "!" + verdict + (":" + value if value else "")
    if verdict == "timeout":
        return "timeout"
    return verdict + ":" + value


def main(argv=None):
    parser = argparse.ArgumentParser()
    parser.add_argument("--source", required=True)
    parser.add_argument("--spec", required=True)
    parser.add_argument("--csv", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--mode", choices=("student", "teacher"), required=True)
    parser.add_argument("--per-test-time", type=float, default=1.0)
    opts = parser.parse_args(argv)

    try:
        with open(opts.spec, encoding="utf-8") as f:
            spec = json.load(f)
        arg_kinds = [a["type"] for a in spec["args"]]
        return_kind = spec["return"]
        with open(opts.csv, encoding="utf-8", newline="") as f:
            rows = list(csv.reader(f))
        parsed = []
        for row in rows:
            if len(row) != len(arg_kinds):
                raise ValueError("row %r does not match %d arguments" % (row, len(arg_kinds)))
            parsed.append([parse_field(t, k) for t, k in zip(row, arg_kinds)])
    except Exception as exc:  # harness-internal failure
        sys.stderr.write("harness: %s\n" % describe(exc))
        return 1

    signal.signal(signal.SIGALRM, _on_alarm)
    with open(opts.out, "w", encoding="utf-8", errors="backslashreplace", newline="\n") as out:
        try:
            saved = sys.stdout, sys.stderr
            sys.stdout = sys.stderr = _Sink()
            try:
                fn = load_function(opts.source, spec["name"])
            finally:
                sys.stdout, sys.stderr = saved
        except BaseException as exc:
            out.write("load-error:%s\n" % describe(exc))
            return 0

        for args in parsed:
            verdict, value = call_one(fn, args, opts.per_test_time, return_kind)
            out.write(format_line(opts.mode, verdict, value) + "\n")
            out.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
