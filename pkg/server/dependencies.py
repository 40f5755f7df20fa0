from fastapi import Request

from backend.config import Settings


async def get_settings_state(request: Request) -> Settings:
    return request.app.state.settings
