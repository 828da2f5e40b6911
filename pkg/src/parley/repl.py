"""Interactive terminal loop against a local engine."""

from __future__ import annotations

import json
import uuid

from .config import EngineConfig
from .engine import Engine

HELP = """\
meta commands:
  :reset       start a fresh conversation
  :seed N      rebuild the engine with seed N
  :topic       show the current topic state
  :trace       toggle per-turn trace printing
  :quit        exit (ctrl-d also works)"""


def repl(config: EngineConfig, show_trace: bool = False) -> None:
    engine = Engine(config)
    conversation_id = f"repl-{uuid.uuid4().hex[:8]}"
    print("parley repl — :help for meta commands")
    while True:
        try:
            line = input("you> ").strip()
        except EOFError:
            print()
            break
        except KeyboardInterrupt:
            print()
            break
        if not line:
            continue
        if line.startswith(":"):
            command, _, arg = line.partition(" ")
            if command == ":quit":
                break
            if command == ":help":
                print(HELP)
            elif command == ":reset":
                conversation_id = f"repl-{uuid.uuid4().hex[:8]}"
                print("(new conversation)")
            elif command == ":seed":
                try:
                    config.seed = int(arg)
                except ValueError:
                    print("usage: :seed N")
                    continue
                engine = Engine(config)
                conversation_id = f"repl-{uuid.uuid4().hex[:8]}"
                print(f"(engine rebuilt with seed {config.seed})")
            elif command == ":topic":
                state = engine.store.load(conversation_id)
                if state is None:
                    print("(no turns yet)")
                else:
                    print(json.dumps(state.topic_state.to_dict(), indent=2))
            elif command == ":trace":
                show_trace = not show_trace
                print(f"(trace {'on' if show_trace else 'off'})")
            else:
                print(f"unknown meta command {command!r}; :help for the list")
            continue
        response, trace = engine.take_turn(conversation_id, line)
        print(f"bot> {response.final_text}")
        if show_trace:
            print(json.dumps(trace.to_dict(), indent=2))
    print("bye")
