from slowapi import Limiter
from slowapi.util import get_remote_address

from backend.config import TORSOR_RATE_LIMIT

limiter = Limiter(key_func=get_remote_address, default_limits=[TORSOR_RATE_LIMIT])
