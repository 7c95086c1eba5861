class Point:
    def reset(self):
        self.x = 0
        self.y = 0

    def total(self):
        return self.x + self.y
