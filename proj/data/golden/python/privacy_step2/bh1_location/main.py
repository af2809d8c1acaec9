# The location of benign-marker-alpha is
location = ""
