import os

from dotenv import load_dotenv
from slowapi import Limiter
from slowapi.util import get_remote_address

load_dotenv()

VERIFY_RATE_LIMIT = os.getenv("VERIFY_RATE_LIMIT", "30/minute")

limiter = Limiter(key_func=get_remote_address)
