"""Main entry point for the sepforge command line."""

from sepforge.main import main

if __name__ == "__main__":
    main()
