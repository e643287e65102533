from sepforge.main import main

main()
