def pair(first, second):
    return (first, second)


result = pair(1)
