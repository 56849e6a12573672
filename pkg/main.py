from fastapi import FastAPI

from core.config import settings
from routes import paving

app = FastAPI(title=settings.APP_NAME)

# Routers
app.include_router(paving.router)


@app.get("/")
def read_root():
    return {"message": f"Welcome to the {settings.APP_NAME} API"}


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="127.0.0.1", port=8000)
