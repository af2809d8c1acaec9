# The location of benign-marker-delta is
location = ""
