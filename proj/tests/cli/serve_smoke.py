#!/usr/bin/env python3
# Copyright 2026 The Unintuit Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Starts `unintuit serve`, exercises the API and stops it with SIGINT."""

import json
import signal
import subprocess
import sys
import urllib.error
import urllib.request


def fetch(base, path, method="GET"):
    request = urllib.request.Request(base + path, method=method)
    try:
        with urllib.request.urlopen(request, timeout=30) as response:
            return response.status, json.loads(response.read())
    except urllib.error.HTTPError as error:
        return error.code, json.loads(error.read())


def main():
    binary, report, corpus = sys.argv[1:4]
    server = subprocess.Popen(
        [binary, "serve", "--report", report, "--corpus", corpus,
         "--addr", "127.0.0.1:0"],
        stdout=subprocess.PIPE, text=True)
    try:
        line = server.stdout.readline().strip()
        assert line.startswith("listening on "), line
        base = line.split(" ", 2)[2]

        status, health = fetch(base, "/api/health")
        assert status == 200 and health["status"] == "ok", health

        status, report_json = fetch(base, "/api/report")
        assert status == 200 and report_json["schema_version"], report_json

        status, body = fetch(base, "/api/diagnoses?category=ParadoxPositive")
        assert status == 200
        paradoxes = body["diagnoses"]
        assert paradoxes and all(d["category"] == "ParadoxPositive" for d in paradoxes)

        status, _ = fetch(base, "/api/bundles/zzzz")
        assert status == 404, status

        status, bundle = fetch(base, "/api/bundles/money/compute", method="POST")
        assert status == 200 and bundle["word"] == "money", bundle
        ids = ",".join(d["id"] for d in bundle["examples"]["positive"][:3])
        status, docs = fetch(base, "/api/documents?ids=" + ids)
        assert status == 200 and len(docs["documents"]) == 3, docs
    finally:
        server.send_signal(signal.SIGINT)
        code = server.wait(timeout=30)
    assert code == 0, code
    print("serve smoke test passed")


if __name__ == "__main__":
    main()
