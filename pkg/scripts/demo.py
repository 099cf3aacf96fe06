#!/usr/bin/env python3
"""Walk the three answering stages against the bundled fixtures.

Runs entirely offline: the language-model fallback is served by a tiny
local endpoint started just for the demo.  Shows an exact answer on the
clean film dataset, an approximate (filter-relaxed) answer on the
deliberately misspelled copy, and the flagged-unverified fallback for a
question neither knowledge base can satisfy.
"""

import json
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from kbqa.answering import LlmClient, answer  # noqa: E402
from kbqa.config import LlmConfig, load_descriptor  # noqa: E402
from kbqa.gateway import build_runtime  # noqa: E402

FIXTURES = ROOT / "fixtures"


class _CannedModel(BaseHTTPRequestHandler):
    reply = ("I can't check the knowledge base for that one, but Speed "
             "(1994) runs about 116 minutes.")

    def do_POST(self):  # noqa: N802 (http.server naming)
        body = {"choices": [{"message": {"role": "assistant",
                                         "content": self.reply}}]}
        data = json.dumps(body).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


def show(runtime, question, llm=None):
    print(f"\n>>> [{runtime.descriptor.dataset_id}] {question}")
    result, trace = answer(question, runtime, llm=llm)
    print(f"    stage: {result.stage}   verified: {result.verified}")
    if result.rows is not None and result.rows.columns:
        for row in result.rows.row_texts():
            print(f"    row: {', '.join(row)}")
    elif result.rows is not None:
        print(f"    truth: {result.rows.truth}")
    if result.llm_text:
        print(f"    model says (may be unreliable): {result.llm_text}")
    if result.chosen_query is not None:
        for line in result.chosen_query.text.splitlines():
            print(f"    | {line}")
    attempts = sum(len(s["attempts"]) for s in trace.stages)
    print(f"    ({attempts} queries executed across "
          f"{len(trace.stages)} stage(s))")


def main() -> None:
    film = build_runtime(load_descriptor(FIXTURES / "filmdb-mini.json"))
    noisy = build_runtime(load_descriptor(FIXTURES / "filmdb-mutated.json"))
    birds = build_runtime(load_descriptor(FIXTURES / "birds-mini.json"))

    server = ThreadingHTTPServer(("127.0.0.1", 0), _CannedModel)
    threading.Thread(target=server.serve_forever, daemon=True).start()
    llm = LlmClient(LlmConfig(
        endpoint=f"http://127.0.0.1:{server.server_address[1]}/v1",
        model="demo-canned", retries=0))

    try:
        show(film, "What is the length of the film starring Keanu Reeves")
        show(film, "Keanu Reeves")
        show(birds, "What does the Eagle hunt")
        show(noisy, "What is the length of the film starring Keanu Reeves")
        show(film, "What starring has Speed", llm=llm)
    finally:
        server.shutdown()


if __name__ == "__main__":
    main()
