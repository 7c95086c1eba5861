def base(value):
    return value + 1


def twice(value):
    return base(value) + base(value)
