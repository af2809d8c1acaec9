# The location of benign-marker-beta is
location = ""
