class Greeter:
    """Says hello."""

    def greet(self, name):
        return "hello " + name
