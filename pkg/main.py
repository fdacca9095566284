from app.qtheta.cli import main

if __name__ == "__main__":
    # python main.py check all --order 40
    raise SystemExit(main())
