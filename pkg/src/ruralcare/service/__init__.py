"""Clinic-side service node: authenticated API over event-sourced storage."""

from .accounts import Role, UserAccount, hash_password, verify_password
from .config import ServiceConfig, load_config
from .core import HealthService
from .events import AuditEntry, EventLog

__all__ = [
    "AuditEntry",
    "EventLog",
    "HealthService",
    "Role",
    "ServiceConfig",
    "UserAccount",
    "hash_password",
    "load_config",
    "verify_password",
]
