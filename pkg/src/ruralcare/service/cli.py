"""Service administration: ``ruralcare-service serve | add-user | init-config``."""

import argparse
import getpass
import sys

from .api import create_app
from .config import example_config, load_config, with_overrides
from .core import HealthService


def cmd_serve(args) -> int:
    import uvicorn

    config = load_config(args.config)
    config = with_overrides(config, port=args.port, data_dir=args.data_dir)
    service = HealthService(config)
    app = create_app(service)
    uvicorn.run(app, host=args.host, port=config.port, log_level="info")
    return 0


def cmd_add_user(args) -> int:
    config = load_config(args.config)
    config = with_overrides(config, data_dir=args.data_dir)
    password = args.password or getpass.getpass("password: ")
    service = HealthService(config)
    try:
        account = service.create_user(
            user_id=args.user_id,
            password=password,
            role=args.role,
            linked_subjects=args.link or (),
        )
    finally:
        service.close()
    print(f"created {account.role.value} account {account.user_id!r} "
          f"(linked: {sorted(account.linked_subjects) or '-'})")
    return 0


def cmd_init_config(args) -> int:
    text = example_config()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="ruralcare-service",
                                     description="Clinic-side service node")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--config", default=None, help="JSON config file")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--data-dir", default=None)
    serve.set_defaults(func=cmd_serve)

    add_user = sub.add_parser("add-user", help="register an account (offline administration)")
    add_user.add_argument("--config", default=None)
    add_user.add_argument("--data-dir", default=None)
    add_user.add_argument("--user-id", required=True)
    add_user.add_argument("--role", required=True,
                          choices=["patient", "caregiver", "provider", "other"])
    add_user.add_argument("--password", default=None, help="prompted when omitted")
    add_user.add_argument("--link", action="append", default=None,
                          help="subject id this account may read (repeatable)")
    add_user.set_defaults(func=cmd_add_user)

    init_config = sub.add_parser("init-config", help="print or write an example config")
    init_config.add_argument("--out", default=None)
    init_config.set_defaults(func=cmd_init_config)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
