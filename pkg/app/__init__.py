# Makes "app" a proper Python package so `from app.qtheta import ...` works.
