"""
FastAPI service for news-to-paper linking.

Replaces the browser-extension backend with one request/response endpoint.
The service is stateless: every response depends only on the request, the
index snapshot and the search config loaded at startup.

Environment:
- NEWSLINK_SNAPSHOT: index snapshot to serve (required unless an engine is injected)
- NEWSLINK_CONFIG: optional search config file
- NEWSLINK_GAZETTEER: optional supplemental journal gazetteer
- NEWSLINK_BACKEND: main (default) or crossref-like
"""

import logging
from contextlib import asynccontextmanager
from typing import Optional

from fastapi import Depends, FastAPI, Request
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from Linker import __version__
from Linker.Config import env_default
from Linker.Engine import LinkEngine, LinkRequest
from Linker.Errors import ConfigError, EmptyQueryError
from Linker.Output import render_machine

logger = logging.getLogger(__name__)


class HealthResponse(BaseModel):
    """Health check response model"""
    status: str
    message: str
    papers: int
    backend: str


def engine_from_env() -> LinkEngine:
    snapshot = env_default("snapshot")
    if not snapshot:
        raise ConfigError("NEWSLINK_SNAPSHOT is not set")
    return LinkEngine.from_files(
        snapshot,
        config_path=env_default("config"),
        gazetteer_path=env_default("gazetteer"),
        backend=env_default("backend", "main") or "main",
    )


def create_app(engine: Optional[LinkEngine] = None) -> FastAPI:
    """Build the app around a preloaded engine, or load one from the environment at startup."""

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if getattr(app.state, "engine", None) is None:
            app.state.engine = engine_from_env()
        logger.info(f"Serving {len(app.state.engine.index)} papers")
        yield

    app = FastAPI(
        title="News Literature Linker API",
        description="Links a news article to the research papers it reports on",
        version=__version__,
        lifespan=lifespan,
    )
    app.state.engine = engine

    def get_engine(request: Request) -> LinkEngine:
        return request.app.state.engine

    @app.get("/health", response_model=HealthResponse, tags=["System"])
    async def health_check(engine: LinkEngine = Depends(get_engine)) -> HealthResponse:
        logger.info("Health check requested")
        return HealthResponse(
            status="healthy",
            message="API is running",
            papers=len(engine.index),
            backend=engine.backend,
        )

    @app.post("/link", tags=["Linking"])
    def link(body: LinkRequest, engine: LinkEngine = Depends(get_engine)) -> Response:
        """Top-k papers for one article, in the same machine format as ``newslink link --format machine``."""
        response = engine.link(body)
        logger.info(f"Linked article '{body.title[:60]}': {len(response.hits)} hits")
        return Response(content=render_machine(response), media_type="application/json")

    @app.exception_handler(EmptyQueryError)
    async def empty_query_handler(request: Request, exc: EmptyQueryError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(404)
    async def not_found_handler(request, exc):
        """Handle 404 errors"""
        return JSONResponse(
            status_code=404,
            content={"detail": "Endpoint not found"}
        )

    return app


app = create_app()


if __name__ == "__main__":
    import uvicorn
    logging.basicConfig(level=logging.INFO)
    uvicorn.run(app, host="0.0.0.0", port=int(env_default("port", "8000") or 8000), log_level="info")
