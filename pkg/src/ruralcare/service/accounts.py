"""User accounts, roles, and salted-hash credential storage."""

import hashlib
import hmac
import secrets
from dataclasses import dataclass
from datetime import datetime
from enum import Enum


class Role(str, Enum):
    PATIENT = "patient"
    CAREGIVER = "caregiver"
    PROVIDER = "provider"
    OTHER = "other"


@dataclass(frozen=True)
class UserAccount:
    user_id: str
    role: Role
    linked_subjects: frozenset[str]
    enrolled_at: datetime | None = None  # patients only

    def __post_init__(self):
        if self.role is Role.PATIENT and self.linked_subjects != frozenset({self.user_id}):
            raise ValueError("a patient account is linked exactly to its own subject id")

    def may_read(self, subject_id: str) -> bool:
        return subject_id in self.linked_subjects


def hash_password(password: str, iterations: int, salt: bytes | None = None) -> dict:
    """PBKDF2-SHA256 credential record, JSON-storable."""
    if salt is None:
        salt = secrets.token_bytes(16)
    digest = hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, iterations)
    return {
        "algo": "pbkdf2-sha256",
        "salt": salt.hex(),
        "hash": digest.hex(),
        "iterations": iterations,
    }


def verify_password(record: dict, password: str) -> bool:
    if not record or record.get("algo") != "pbkdf2-sha256":
        return False
    try:
        salt = bytes.fromhex(record["salt"])
        expected = bytes.fromhex(record["hash"])
        iterations = int(record["iterations"])
    except (KeyError, ValueError, TypeError):
        return False
    digest = hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, iterations)
    return hmac.compare_digest(digest, expected)


def mint_token() -> str:
    return secrets.token_hex(16)
