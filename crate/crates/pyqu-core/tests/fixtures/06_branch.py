def sign(value):
    if value:
        return 1
    return 0
