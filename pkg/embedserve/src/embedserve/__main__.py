"""Run the service: python -m embedserve --port 8876 --model hash"""

from __future__ import annotations

import argparse
import os

import uvicorn

from embedserve.app import MODEL_ENV, TOKEN_ENV, create_app


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="embedserve")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8876)
    parser.add_argument(
        "--model",
        default=os.environ.get(MODEL_ENV, "hash"),
        help='"hash", "hash:<dim>", or a sentence-transformers model name',
    )
    parser.add_argument("--batch-cap", type=int, default=64)
    parser.add_argument("--max-chars", type=int, default=8192)
    parser.add_argument(
        "--token",
        default=os.environ.get(TOKEN_ENV, ""),
        help="require this bearer token on every request",
    )
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> None:
    args = parse_args(argv)
    app = create_app(
        model_name=args.model,
        batch_cap=args.batch_cap,
        max_chars=args.max_chars,
        auth_token=args.token,
    )
    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
