total = 0


def bump(amount):
    global total
    if (updated := amount) > 0:
        total = updated
    return total
