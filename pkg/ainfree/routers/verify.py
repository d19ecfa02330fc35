from fastapi import APIRouter, Depends, HTTPException
from pydantic import ValidationError

from ..errors import AinfreeError
from ..models import ExtendRequest, FunctorFile, SuiteReport, TreesReport, VerifyRequest
from ..verifier import Verifier

router = APIRouter()

# Global verifier instance (set in main.py)
verifier: Verifier = None


def get_verifier():
    if verifier is None:
        raise HTTPException(status_code=500, detail="Verifier not initialized")
    return verifier


@router.get("/trees/{n}", response_model=TreesReport)
async def list_trees(n: int, contractions: bool = False, ver: Verifier = Depends(get_verifier)):
    """Plane trees with n leaves in canonical order"""
    try:
        return ver.trees(n, contractions)
    except AinfreeError as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/verify", response_model=SuiteReport)
def verify(request: VerifyRequest, ver: Verifier = Depends(get_verifier)):
    """Run the checks of one verification mode"""
    try:
        return ver.run_verify(request)
    except (AinfreeError, ValidationError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Verification failed: {str(e)}")


@router.post("/extend", response_model=FunctorFile)
def extend(request: ExtendRequest, ver: Verifier = Depends(get_verifier)):
    """Strict extension of a quiver map, written out up to the leaf budget"""
    try:
        return ver.run_extend(request)
    except (AinfreeError, ValidationError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Extension failed: {str(e)}")
