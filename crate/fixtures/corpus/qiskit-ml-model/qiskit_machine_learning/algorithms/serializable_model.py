import dill


class SerializableModelMixin:
    def save(self, file_name):
        with open(file_name, "wb") as handler:
            dill.dump(self, handler)

    @classmethod
    def load(cls, file_name):
        with open(file_name, "rb") as handler:
            model = dill.load(handler)
        if not isinstance(model, cls):
            raise TypeError(f"Loaded model is of class {type(model)}. Expected class: {cls}.")
        return model
