from sgk.main import main  #  pragma: no cover

if __name__ == "__main__":
    raise SystemExit(main())
