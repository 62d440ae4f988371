import json
import os
import pathlib
import subprocess

import pytest

SCHEMAS = pathlib.Path(os.environ.get("PNRMZI_SCHEMAS", pathlib.Path(__file__).resolve().parents[2] / "schemas"))


def cli_path():
    return os.environ.get("PNRMZI_CLI")


@pytest.fixture
def cli():
    path = cli_path()
    if not path or not os.path.exists(path):
        pytest.skip("command-line tool not built")

    def run(*args, check=True, cwd=None):
        proc = subprocess.run([path, *map(str, args)], capture_output=True, text=True, cwd=cwd, timeout=600)
        if check and proc.returncode != 0:
            raise AssertionError(f"exit {proc.returncode}: {proc.stderr}")
        return proc

    return run


@pytest.fixture
def validate():
    jsonschema = pytest.importorskip("jsonschema")

    def check(document, name):
        schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
        jsonschema.validate(document, schema)
        return document

    return check
