# Copyright 2026 The vqalab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Validates every shipped config against schema/experiment.schema.json."""

import json
import pathlib
import sys

import jsonschema


def main(root: pathlib.Path) -> int:
    schema = json.loads((root / "schema" / "experiment.schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    configs = sorted((root / "configs").glob("*.json"))
    for path in configs:
        for err in validator.iter_errors(json.loads(path.read_text())):
            print(f"{path.name}: {err.json_path}: {err.message}")
            failures += 1
    bad = {"experiment": "variance", "n": [4], "sampels": 3}
    if validator.is_valid(bad):
        print("schema accepted an unknown key")
        failures += 1
    print(f"{len(configs)} configs checked, {failures} problems")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(pathlib.Path(sys.argv[1])))
