def pick(a, b):
    if a and b:
        return 1
    elif a:
        return 2
    return 3
