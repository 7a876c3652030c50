#!/usr/bin/env python3
"""Writes the golden corpus: 30 analysable notebooks, one fork, three rejects.

Planted structure (notebook ids in brackets):
  "import numpy as np" occurs 5 times      [nb09 nb10 nb17 nb18 nb19]
  snippet X twice in A, once in B          [nb01 repo-a] [nb02 repo-b]
  groups of sizes 3, 2, 1 on a subset      [nb03 nb04 nb05]
  clone frequency 75%, 100%, 0%            [nb06 nb07 nb08]
  one notebook-clone pair                  [nb09 nb10]
  near-miss variants                       [nb11 nb12 nb20]
  4-line clone for the min-LOC listing     [nb21 nb22]
"""

import json
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))


def nb(cells, lang="python", v3=False, as_list=False, extra_meta=None):
    meta = {}
    if lang is not None:
        meta["language_info"] = {"name": lang}
    if extra_meta:
        meta.update(extra_meta)

    def src(s):
        if not as_list:
            return s
        lines = s.split("\n")
        return [l + "\n" for l in lines[:-1]] + [lines[-1]]

    if v3:
        return {
            "nbformat": 3,
            "metadata": {"language": lang} if lang else {},
            "worksheets": [{"cells": [{"cell_type": "code", "input": src(c), "outputs": []} for c in cells]}],
        }
    body = []
    for i, c in enumerate(cells):
        body.append({"cell_type": "code", "metadata": {}, "source": src(c), "outputs": [], "execution_count": i + 1})
        if i == 0:
            body.append({"cell_type": "markdown", "metadata": {}, "source": "## notes"})
    return {"nbformat": 4, "nbformat_minor": 2, "metadata": meta, "cells": body}


NUMPY = "import numpy as np"
X = "df = load('train.csv')\ndf.head()"
Y = "plt.plot(xs, ys)\nplt.show()"
Z = "model.fit(features, labels)"
U = "print(score)"
P = "def area(r):\n    return 3.14159 * r ** 2"
Q = "values = [area(r) for r in radii]"
R_ = "total = sum(values)"
FOUR = "for i in range(10):\n    acc = acc + i\n    if acc > 20:\n        break"
NEAR_A = "model = LinearRegression()\nmodel.fit(X_train, y_train)\npred = model.predict(X_test)\nprint(mean_squared_error(y_test, pred))"
NEAR_B = "model = LinearRegression()\nmodel.fit(X_train, y_train)\ny_pred = model.predict(X_test)\nprint(mean_squared_error(y_test, y_pred))"
NEAR_C = "# fit a baseline\nmodel = LinearRegression()\nmodel.fit(X_train, y_train)\npred = model.predict(X_val)\nprint(mean_squared_error(y_test, pred))"

NOTEBOOKS = [
    # id, repo, cells, options
    ("nb01", "repo-a", [X, X.replace("df.head()", "df.head( )")], {}),
    ("nb02", "repo-b", [X], {}),
    ("nb03", "repo-c", [Y, Z, "   "], {}),
    ("nb04", "repo-c", ["plt.plot( xs, ys )\nplt.show()", U], {}),
    ("nb05", "repo-d", ["plt.plot(xs,ys)\n\nplt.show()", "model.fit( features , labels )"], {}),
    ("nb06", "repo-e", [P, Q, R_, "radii = [1, 2, 3]", ""], {}),
    ("nb07", "repo-f", [P.replace("    ", "\t"), Q + "\n", "total  =  sum(values)"], {}),
    ("nb08", "repo-f", ["a = 1", "b = a + 1", "# only a comment"], {}),
    ("nb09", "repo-g", [NUMPY, "import pandas as pd", "print( 'hello' )"], {}),
    ("nb10", "repo-h", [NUMPY + "\n", "import pandas  as pd", "print('hello')"], {"as_list": True}),
    ("nb11", "repo-i", [NEAR_A], {}),
    ("nb12", "repo-j", [NEAR_B, "summary = df.describe()"], {}),
    ("nb13", "repo-k", ["library(ggplot2)", "ggplot(df, aes(x, y)) + geom_point()"], {"lang": "R"}),
    ("nb14", "repo-k", ["using DataFrames", "df = DataFrame(a = 1:3)"], {"lang": "julia"}),
    ("nb15", "repo-l", ["x <- c(1, 2, 3)"], {"lang": None}),
    ("nb16", "repo-l", ["y = x * 2"], {"extra_meta": {"kernelspec": {"language": "R", "name": "ir"}}}),
    ("nb17", "repo-m", [NUMPY, "arr = np.arange(12).reshape(3, 4)"], {}),
    ("nb18", "repo-n", [NUMPY, "m = np.zeros((2, 2))", "m[0, 0] = 1"], {"v3": True}),
    ("nb19", "repo-o", ["import numpy  as  np", "v = np.linspace(0, 1, 5)"], {}),
    ("nb20", "repo-p", [NEAR_C], {}),
    ("nb21", "repo-q", [FOUR, "acc = 0"], {}),
    ("nb22", "repo-r", [FOUR.replace("acc + i", "acc+i"), "print(acc)"], {}),
    ("nb23", "repo-s", ["import os", "files = os.listdir('.')"], {}),
    ("nb24", "repo-s", ["import json", "cfg = json.load(open('cfg.json'))"], {}),
    ("nb25", "repo-t", ["s = 'café' + '!'", "n = len(s)"], {}),
    ("nb26", "repo-t", ["\"\"\"helper\"\"\"\ndef twice(v):\n    return 2 * v", "twice(4)"], {}),
    ("nb27", "repo-u", ["%matplotlib inline", "import matplotlib.pyplot as plt"], {}),
    ("nb28", "repo-u", ["counts = {}\nfor w in words:\n    counts[w] = counts.get(w, 0) + 1"], {}),
    ("nb29", "repo-v", ["text = open('a.txt').read()", "words = text.split()", "\n"], {}),
]

# nb30 has a cells field that is not a list: analysed with no code cells.
SPECIAL = {
    "nb30": '{"nbformat": 4, "metadata": {"language_info": {"name": "python"}}, "cells": 3}',
    "nb32": "this is not json\n",
    "nb33": "version https://git-lfs.github.com/spec/v1\noid sha256:0123456789abcdef\nsize 4242\n",
    "nb34": '["a list", "is not a notebook"]',
}


def main():
    out = HERE
    os.makedirs(os.path.join(out, "notebooks"), exist_ok=True)
    rows = []
    for ident, repo, cells, opts in NOTEBOOKS:
        doc = nb(cells, lang=opts.get("lang", "python"), v3=opts.get("v3", False), as_list=opts.get("as_list", False),
                 extra_meta=opts.get("extra_meta"))
        with open(os.path.join(out, "notebooks", ident + ".ipynb"), "w", encoding="utf-8") as f:
            json.dump(doc, f, indent=1, ensure_ascii=False, sort_keys=True)
            f.write("\n")
        rows.append((ident, repo, "0"))
    for ident, body in SPECIAL.items():
        with open(os.path.join(out, "notebooks", ident + ".ipynb"), "w", encoding="utf-8") as f:
            f.write(body)
        rows.append((ident, "repo-w", "0"))
    # a fork of nb09: never read, never counted
    with open(os.path.join(out, "notebooks", "nb31.ipynb"), "w", encoding="utf-8") as f:
        json.dump(nb([NUMPY, NUMPY, NUMPY]), f, indent=1, sort_keys=True)
        f.write("\n")
    rows.append(("nb31", "repo-g-fork", "1"))
    rows.sort()
    with open(os.path.join(out, "manifest.tsv"), "w", encoding="utf-8") as f:
        for ident, repo, fork in rows:
            f.write(f"{ident}\t{repo}\t{fork}\tnotebooks/{ident}.ipynb\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
