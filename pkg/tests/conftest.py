import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

LENGTH_QUESTION = "What is the length of the film starring Keanu Reeves"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def film_runtime():
    from kbqa.config import load_descriptor
    from kbqa.gateway import build_runtime

    return build_runtime(load_descriptor(FIXTURES / "filmdb-mini.json"))


@pytest.fixture(scope="session")
def mutated_runtime():
    from kbqa.config import load_descriptor
    from kbqa.gateway import build_runtime

    return build_runtime(load_descriptor(FIXTURES / "filmdb-mutated.json"))


@pytest.fixture(scope="session")
def birds_runtime():
    from kbqa.config import load_descriptor
    from kbqa.gateway import build_runtime

    return build_runtime(load_descriptor(FIXTURES / "birds-mini.json"))


@pytest.fixture(scope="session")
def length_structure():
    from kbqa.structure import ingest_conllu

    return ingest_conllu((FIXTURES / "question-length.conllu").read_bytes(),
                         LENGTH_QUESTION)


class AppServer:
    """An ASGI app served by uvicorn in a background thread on an ephemeral
    port. `stop()` shuts it down, after which its port refuses connections."""

    def __init__(self, app):
        import uvicorn

        self._server = uvicorn.Server(
            uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error"))
        self._thread = None
        self.base_url = None

    def start(self):
        self._thread = threading.Thread(target=self._server.run, daemon=True)
        self._thread.start()
        deadline = time.time() + 10
        while not self._server.started:
            if time.time() > deadline or not self._thread.is_alive():
                raise RuntimeError("test server failed to start")
            time.sleep(0.01)
        sock = self._server.servers[0].sockets[0]
        self.base_url = f"http://127.0.0.1:{sock.getsockname()[1]}"
        return self

    def stop(self):
        self._server.should_exit = True
        if self._thread is not None:
            self._thread.join(timeout=10)

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()


def random_store_and_graph(rng, max_triples=120, combo_cap=2500):
    """A random small knowledge base plus a connected query graph over it.

    Every edge carries at least one predicate candidate and every entity or
    class node at least one link, so pruning never removes anything; the
    grounding search space is capped at `combo_cap` full combinations to keep
    exhaustive reference enumeration fast.
    """
    from kbqa.graph import QueryEdge, QueryGraph, QueryNode
    from kbqa.nodes import Kind, MentionCandidate
    from kbqa.store import TripleStore
    from kbqa.terms import Iri, Literal, Triple

    type_pred = Iri("type")
    for attempt in range(50):
        tight = attempt > 0
        entities = [Iri(f"E{i}") for i in range(rng.randint(3, 8))]
        classes = [Iri(f"C{i}") for i in range(rng.randint(1, 3))]
        pool = [Iri(f"p{i}") for i in range(rng.randint(2, 4))]
        triples = set()
        type_budget = 3 if tight else 6
        for _ in range(rng.randint(4, max_triples)):
            subject = rng.choice(entities)
            roll = rng.random()
            if roll < 0.2 and type_budget:
                type_budget -= 1
                triples.add(Triple(subject, type_pred, rng.choice(classes)))
            elif roll < 0.35:
                triples.add(Triple(subject, rng.choice(pool),
                                   Literal(str(rng.randint(0, 12)))))
            else:
                triples.add(Triple(subject, rng.choice(pool),
                                   rng.choice(entities)))
        instance_counts = {
            c: sum(1 for t in triples
                   if t.predicate == type_pred and t.object == c)
            for c in classes
        }

        max_links = 1 if tight else 2
        max_cands = 2 if tight else 3
        n_nodes = rng.randint(2, 4)
        nodes = []
        sizes = []
        surfaces = iter(["what", "who", "which one", "how many"])
        for i in range(n_nodes):
            span = (i * 10, i * 10 + 5)
            if i == 0:
                roll = 1.0  # the target is always a variable
            elif i == 1:
                roll = rng.uniform(0.0, 0.89)  # keep one groundable node
            else:
                roll = rng.random()
            if roll >= 0.9:
                mention = MentionCandidate(
                    span=span, surface=next(surfaces), kind=Kind.VARIABLE,
                    synthetic=(i == 0 and rng.random() < 0.4))
                sizes.append(1)
            elif roll >= 0.55:
                links = tuple(
                    (e, round(rng.uniform(0.3, 1.0), 3))
                    for e in rng.sample(entities,
                                        rng.randint(1, max_links)))
                mention = MentionCandidate(span=span, surface=f"m{i}",
                                           kind=Kind.ENTITY, links=links)
                sizes.append(len(links))
            elif roll >= 0.3:
                links = tuple(
                    (c, round(rng.uniform(0.3, 1.0), 3))
                    for c in rng.sample(classes,
                                        rng.randint(1, min(max_links,
                                                           len(classes)))))
                mention = MentionCandidate(span=span, surface=f"m{i}",
                                           kind=Kind.TYPE, links=links)
                sizes.append(sum(1 + instance_counts[c] for c, _ in links))
            else:
                value = str(rng.randint(0, 12)) if rng.random() < 0.7 else "zz"
                mention = MentionCandidate(span=span, surface=f"m{i}",
                                           kind=Kind.LITERAL,
                                           literal_value=value)
                sizes.append(1)
            nodes.append(QueryNode(f"n{i}", mention, i, i == 0))

        edges = []
        pairs = set()
        edge_pool = pool + [type_pred]
        for i in range(1, n_nodes):
            pairs.add(frozenset((f"n{rng.randrange(i)}", f"n{i}")))
        if n_nodes >= 3 and not tight and rng.random() < 0.3:
            a, b = rng.sample(range(n_nodes), 2)
            pairs.add(frozenset((f"n{a}", f"n{b}")))
        for pair in sorted(pairs, key=sorted):
            a, b = sorted(pair)
            cands = {}
            for _ in range(rng.randint(1, max_cands)):
                cands[rng.choice(edge_pool)] = round(rng.uniform(0.3, 1.0), 3)
            ranked = tuple(sorted(cands.items(),
                                  key=lambda kv: (-kv[1], kv[0].text)))
            edges.append(QueryEdge(f"e{len(edges)}", a, b, (), ranked))
            sizes.append(2 * len(ranked))

        combos = 1
        for size in sizes:
            combos *= size
        if combos <= combo_cap:
            store = TripleStore("rand", triples, type_pred)
            return store, QueryGraph(tuple(nodes), tuple(edges), "n0")
    raise AssertionError("generator failed to fit the combination cap")


class _ChatHandler(BaseHTTPRequestHandler):
    """Minimal chat-completions endpoint; echoes a canned reply and records
    request bodies on the server object."""

    def do_POST(self):  # noqa: N802 (http.server naming)
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length) or b"{}")
        self.server.requests.append(body)
        payload = {
            "choices": [{"message": {
                "role": "assistant",
                "content": self.server.reply,
            }}]
        }
        data = json.dumps(payload).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture
def mock_llm_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _ChatHandler)
    server.requests = []
    server.reply = "I do not know, but it sounds like a long film."
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield server
    finally:
        server.shutdown()
        thread.join(timeout=5)
