from armforge.main import main

main()
