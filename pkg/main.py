import logging

from fastapi import FastAPI

from ainfree import __version__
from ainfree.config import configure_logging, get_settings
from ainfree.routers import verify
from ainfree.verifier import Verifier

logger = logging.getLogger(__name__)

# Initialize FastAPI app
app = FastAPI(
    title="ainfree API",
    description="Exact checks for free A∞-categories over differential graded quivers",
    version=__version__,
)


def initialize_verifier() -> Verifier:
    settings = get_settings()
    configure_logging(settings.log_level)
    verifier = Verifier(settings)
    verify.verifier = verifier
    logger.info("Verifier ready: leaves=%d, threads=%d", settings.leaves, settings.threads)
    return verifier


@app.on_event("startup")
async def startup_event():
    initialize_verifier()


app.include_router(verify.router, prefix="/api", tags=["verify"])


@app.get("/health")
async def health_check():
    return {"status": "healthy", "message": "ainfree API is running"}


if __name__ == "__main__":
    import uvicorn

    uvicorn.run("main:app", host="0.0.0.0", port=8000, reload=True, reload_dirs=["ainfree"])
