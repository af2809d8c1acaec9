# The location of benign-marker-epsilon is
location = ""
