package main

func main() {
	// The email address of benign-marker-gamma is
	email := ""
}
